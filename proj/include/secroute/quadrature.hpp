/* Copyright 2026 The secroute Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "secroute/geometry.hpp"

namespace secroute {

/// Raised when adaptive refinement hits its panel cap before meeting the
/// requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  /// Worst relative error estimate at the point of failure.
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct QuadratureSpec {
  int order = 8;               // Gauss-Legendre points per panel axis
  double rel_tol = 1e-6;       // target relative error per integrand
  double abs_tol_per_area = 1e-13;
  std::size_t max_panels = 60000;
  int initial_split = 8;       // initial panels per axis
};

/// Gauss-Legendre nodes/weights on [-1, 1]. Supported orders: 2..20 even,
/// plus 3, 5, 7.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  static const GaussLegendre& of_order(int order);
};

struct Panel {
  double x0, x1, y0, y1;
  double area() const noexcept { return (x1 - x0) * (y1 - y0); }
};

/// Frozen 2-D rule: sum_i w_i f(p_i) approximates the integral over the
/// region it was built for.
struct CompositeRule {
  std::vector<Point> points;
  std::vector<double> weights;
  std::size_t panel_count = 0;
};

struct AdaptiveResult {
  CompositeRule rule;
  std::vector<double> integrals;  // per probe integrand
  std::vector<double> errors;     // per probe absolute error estimates
};

/// Appends the tensor rule of `gl` mapped to `panel`.
void append_panel_rule(const Panel& panel, const GaussLegendre& gl,
                       CompositeRule& out);

namespace detail {

struct Leaf {
  Panel panel;
  std::vector<double> own;   // per probe, this panel's rule
  std::vector<double> kids;  // per probe, sum over the 4 children
  double score = 0.0;
};

inline std::array<Panel, 4> split(const Panel& p) {
  const double xm = 0.5 * (p.x0 + p.x1);
  const double ym = 0.5 * (p.y0 + p.y1);
  return {Panel{p.x0, xm, p.y0, ym}, Panel{xm, p.x1, p.y0, ym},
          Panel{p.x0, xm, ym, p.y1}, Panel{xm, p.x1, ym, p.y1}};
}

}  // namespace detail

/// Globally adaptive quadtree integration of a family of integrands.
///
/// `eval(points, out)` fills `out[k * points.size() + i]` with integrand k
/// at point i, for k < probes. The panel with the worst relative error
/// estimate (own rule vs. its four children) is split until every integrand
/// meets `spec.rel_tol`. The returned rule is valid for all probes at once.
template <class Eval>
AdaptiveResult integrate_adaptive(const Region& region, std::size_t probes,
                                  Eval&& eval, const QuadratureSpec& spec) {
  const auto& gl = GaussLegendre::of_order(spec.order);
  const std::size_t npp = gl.nodes.size() * gl.nodes.size();
  CompositeRule scratch;
  std::vector<double> values;

  auto integrate_panel = [&](const Panel& p, std::span<double> acc) {
    scratch.points.clear();
    scratch.weights.clear();
    append_panel_rule(p, gl, scratch);
    values.resize(probes * npp);
    eval(std::span<const Point>(scratch.points), std::span<double>(values));
    for (std::size_t k = 0; k < probes; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < npp; ++i)
        s += scratch.weights[i] * values[k * npp + i];
      acc[k] += s;
    }
  };

  auto make_leaf = [&](const Panel& p, std::vector<double> own) {
    detail::Leaf leaf{p, std::move(own), std::vector<double>(probes, 0.0), 0.0};
    for (const auto& child : detail::split(p)) integrate_panel(child, leaf.kids);
    return leaf;
  };

  std::vector<detail::Leaf> leaves;
  const int s0 = std::max(1, spec.initial_split);
  const double dx = region.width() / s0, dy = region.height() / s0;
  for (int i = 0; i < s0; ++i)
    for (int j = 0; j < s0; ++j) {
      Panel p{region.x_min() + i * dx, region.x_min() + (i + 1) * dx,
              region.y_min() + j * dy, region.y_min() + (j + 1) * dy};
      if (i == s0 - 1) p.x1 = region.x_max();
      if (j == s0 - 1) p.y1 = region.y_max();
      std::vector<double> own(probes, 0.0);
      integrate_panel(p, own);
      leaves.push_back(make_leaf(p, std::move(own)));
    }

  std::vector<double> total(probes, 0.0), err(probes, 0.0);
  for (const auto& l : leaves)
    for (std::size_t k = 0; k < probes; ++k) {
      total[k] += l.kids[k];
      err[k] += std::abs(l.own[k] - l.kids[k]);
    }
  const double abs_floor = spec.abs_tol_per_area * region.area();

  auto scale = [&](std::size_t k) {
    return std::max(spec.rel_tol * std::abs(total[k]), abs_floor);
  };
  auto score = [&](const detail::Leaf& l) {
    double s = 0.0;
    for (std::size_t k = 0; k < probes; ++k)
      s = std::max(s, std::abs(l.own[k] - l.kids[k]) / scale(k));
    return s;
  };
  auto cmp = [&](std::size_t a, std::size_t b) {
    return leaves[a].score < leaves[b].score;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)>
      heap(cmp);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    leaves[i].score = score(leaves[i]);
    heap.push(i);
  }
  std::vector<char> alive(leaves.size(), 1);
  std::size_t live = leaves.size();

  auto worst_ratio = [&] {
    double r = 0.0;
    for (std::size_t k = 0; k < probes; ++k) r = std::max(r, err[k] / scale(k));
    return r;
  };

  while (worst_ratio() > 1.0) {
    if (live + 3 > spec.max_panels)
      throw QuadratureError("adaptive quadrature exceeded panel cap",
                            worst_ratio() * spec.rel_tol);
    const std::size_t idx = heap.top();
    heap.pop();
    alive[idx] = 0;
    const detail::Leaf parent = leaves[idx];
    for (std::size_t k = 0; k < probes; ++k) {
      total[k] -= parent.kids[k];
      err[k] -= std::abs(parent.own[k] - parent.kids[k]);
    }
    for (const auto& child : detail::split(parent.panel)) {
      std::vector<double> own(probes, 0.0);
      integrate_panel(child, own);
      leaves.push_back(make_leaf(child, std::move(own)));
      alive.push_back(1);
      auto& l = leaves.back();
      for (std::size_t k = 0; k < probes; ++k) {
        total[k] += l.kids[k];
        err[k] += std::abs(l.own[k] - l.kids[k]);
      }
      l.score = score(l);
      heap.push(leaves.size() - 1);
    }
    live += 3;
    for (auto& e : err) e = std::max(e, 0.0);
  }

  AdaptiveResult result;
  result.integrals.assign(probes, 0.0);
  result.errors = err;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (!alive[i]) continue;
    append_panel_rule(leaves[i].panel, gl, result.rule);
    ++result.rule.panel_count;
    for (std::size_t k = 0; k < probes; ++k)
      result.integrals[k] += leaves[i].own[k];
  }
  return result;
}

}  // namespace secroute
