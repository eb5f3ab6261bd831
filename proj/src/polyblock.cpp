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

#include "secroute/polyblock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace secroute {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool all_at_least(std::span<const double> v, double floor) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x >= floor; });
}

bool dominated_by(std::span<const double> v, std::span<const double> by) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > by[i]) return false;
  return true;
}

}  // namespace

double objective(std::span<const double> psi, std::span<const double> powers) {
  if (psi.size() != powers.size()) throw ModelError("size mismatch");
  double u = 0.0;
  for (std::size_t n = 0; n < psi.size(); ++n) {
    if (!(powers[n] > 0.0)) return kNegInf;
    u -= psi[n] / powers[n];
  }
  return u;
}

std::vector<double> initial_vertex(const FeasibleRegion& region,
                                   double jammer_power, double rel_tol) {
  const double budget = region.total_power() - jammer_power;
  if (!(jammer_power > 0.0) || !(budget > 0.0))
    throw ModelError("jammer power must lie in (0, P_total)");
  const double cap = region.integral_budget();
  if (!(cap > 0.0)) throw ModelError("SOP budget leaves no feasible power");
  std::vector<double> z(region.hop_count());
  for (std::size_t n = 0; n < z.size(); ++n) {
    const auto& hop = region.hop(n);
    auto phi = [&](double p) { return hop.value(p / jammer_power) - cap; };
    auto slope = [&](double p) { return hop.slope(p / jammer_power) / jammer_power; };
    if (phi(budget) <= 0.0) {
      z[n] = budget;
      continue;
    }
    z[n] = solve_concave_root(phi, slope, 0.0, budget, rel_tol);
  }
  return z;
}

RelaxedBound relaxed_upper_bound(std::span<const double> psi,
                           std::span<const double> z,
                           std::span<const double> chord, double leak_budget,
                           double power_budget, std::span<const double> lower) {
  const std::size_t n = z.size();
  if (psi.size() != n || chord.size() != n) throw ModelError("size mismatch");
  if (!lower.empty() && lower.size() != n) throw ModelError("size mismatch");
  auto floor_of = [&](std::size_t i) { return lower.empty() ? 0.0 : lower[i]; };
  {
    double leak0 = 0.0, sum0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (floor_of(i) > z[i]) return {kNegInf, {}};
      leak0 += chord[i] * floor_of(i);
      sum0 += floor_of(i);
    }
    if (leak0 > leak_budget || sum0 > power_budget) return {kNegInf, {}};
  }
  std::vector<double> p(n);
  double leak = 0.0, sum = 0.0;
  auto fill = [&](double mu, double nu) {
    leak = sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double den = mu * chord[i] + nu;
      p[i] = den > 0.0 ? std::clamp(std::sqrt(psi[i] / den), floor_of(i), z[i]) : z[i];
      leak += chord[i] * p[i];
      sum += p[i];
    }
  };
  // Smallest multiplier (to bisection accuracy) with check() true; check is
  // monotone in the multiplier.
  auto smallest = [](double start, auto&& check) {
    if (check(0.0)) return 0.0;
    double hi = start > 0.0 ? start : 1.0;
    for (int i = 0; i < 4000 && !check(hi); ++i) hi *= 4.0;
    double lo = hi;
    for (int i = 0; i < 4000 && lo > 1e-300 && check(lo); ++i) lo *= 0.25;
    for (int i = 0; i < 100; ++i) {
      const double mid = std::sqrt(lo * hi);
      if (!(mid > lo && mid < hi)) break;
      (check(mid) ? hi : lo) = mid;
    }
    return hi;
  };
  double mu_scale = 0.0, nu_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (chord[i] > 0.0)
      mu_scale = std::max(mu_scale, psi[i] / (chord[i] * z[i] * z[i]));
    nu_scale = std::max(nu_scale, psi[i] / (z[i] * z[i]));
  }
  auto mu_for = [&](double nu) {
    return smallest(mu_scale, [&](double mu) {
      fill(mu, nu);
      return leak <= leak_budget;
    });
  };
  double mu = mu_for(0.0);
  const double nu = smallest(nu_scale, [&](double v) {
    mu = mu_for(v);
    fill(mu, v);
    return sum <= power_budget;
  });
  mu = mu_for(nu);
  fill(mu, nu);
  double dual = mu * (leak_budget - leak) + nu * (power_budget - sum);
  for (std::size_t i = 0; i < n; ++i) dual -= psi[i] / p[i];
  return {std::min(dual, objective(psi, z)), std::move(p)};
}

Projection project_to_boundary(std::span<const double> vertex,
                               const FeasibleRegion& region,
                               double jammer_power, double rel_tol) {
  double sum = 0.0;
  for (double v : vertex) {
    if (!(v > 0.0)) throw ModelError("vertex must be strictly positive");
    sum += v;
  }
  const double budget = region.total_power() - jammer_power;
  const double cap = region.integral_budget();
  const double delta_budget = std::min(1.0, budget / sum);

  std::vector<double> scaled(vertex.size());
  auto phi = [&](double d) {
    for (std::size_t n = 0; n < vertex.size(); ++n) scaled[n] = d * vertex[n];
    return region.leakage(scaled, jammer_power) - cap;
  };
  auto slope = [&](double d) {
    double s = 0.0;
    for (std::size_t n = 0; n < vertex.size(); ++n)
      s += vertex[n] / jammer_power *
           region.hop(n).slope(d * vertex[n] / jammer_power);
    return s;
  };
  double delta = delta_budget;
  if (phi(delta_budget) > 0.0)
    delta = solve_concave_root(phi, slope, 0.0, delta_budget, rel_tol);

  Projection out;
  out.point.resize(vertex.size());
  // Step delta down until P_J + sum P_n fits the budget in floating point.
  for (int i = 0; i < 64; ++i) {
    double used = jammer_power;
    for (std::size_t n = 0; n < vertex.size(); ++n) {
      out.point[n] = delta * vertex[n];
      used += out.point[n];
    }
    if (used <= region.total_power()) break;
    delta = std::nextafter(delta, 0.0);
  }
  out.delta = delta;
  return out;
}

std::vector<std::vector<double>> generate_vertices(
    std::span<const double> vertex, std::span<const double> cut) {
  if (vertex.size() != cut.size()) throw ModelError("size mismatch");
  std::vector<std::vector<double>> out;
  out.reserve(vertex.size());
  for (std::size_t n = 0; n < vertex.size(); ++n) {
    if (cut[n] > vertex[n]) throw ModelError("cut point must lie below vertex");
    std::vector<double> v(vertex.begin(), vertex.end());
    v[n] = cut[n];
    out.push_back(std::move(v));
  }
  return out;
}

PolyblockResult polyblock_solve(const FeasibleRegion& region,
                                double jammer_power,
                                const PolyblockOptions& options) {
  if (!(jammer_power > 0.0 && jammer_power < region.total_power()))
    throw ModelError("jammer power must lie in (0, P_total)");
  if (!(options.eta > 0.0)) throw ModelError("eta must be positive");
  const auto psi = region.psi();
  const double floor = options.vertex_floor > 0.0
                           ? options.vertex_floor
                           : 1e-6 * region.total_power();

  struct Entry {
    double u;
    std::size_t id;
    double reduced_at;  // incumbent value the bound was computed with
    bool operator<(const Entry& o) const {
      return u != o.u ? u < o.u : id > o.id;
    }
  };
  struct Vertex {
    std::vector<double> z;
    std::vector<double> gz;    // g_n(z_n)
    std::vector<double> hint;  // relaxed maximizer
  };
  const double leak_budget = region.integral_budget();
  const double power_budget = region.total_power() - jammer_power;
  const bool relaxed = options.bound == VertexBound::relaxed;
  const bool reduce = relaxed && options.reduce_boxes;
  double lower = kNegInf, upper = kNegInf;

  auto bound_of = [&](const Vertex& v) {
    if (!relaxed) return RelaxedBound{objective(psi, v.z), {}};
    const std::size_t n = v.z.size();
    std::vector<double> chord(n), floor_pt;
    double budget = leak_budget;
    if (reduce && std::isfinite(lower)) {
      // Any p <= z with U(p) > lower has p_m > psi_m / (-lower - sum_{k!=m} psi_k / z_k).
      double total = 0.0;
      for (std::size_t m = 0; m < n; ++m) total += psi[m] / v.z[m];
      floor_pt.resize(n);
      for (std::size_t m = 0; m < n; ++m) {
        const double rest = -lower - (total - psi[m] / v.z[m]);
        if (!(rest > 0.0)) return RelaxedBound{kNegInf, {}};
        floor_pt[m] = psi[m] / rest;
        if (floor_pt[m] >= v.z[m]) return RelaxedBound{kNegInf, {}};
      }
      for (std::size_t m = 0; m < n; ++m) {
        const double a = floor_pt[m], z = v.z[m];
        const double ga = region.hop(m).value(a / jammer_power);
        chord[m] = z - a > 1e-9 * z ? (v.gz[m] - ga) / (z - a) : 0.0;
        budget -= ga - chord[m] * a;
      }
    } else {
      for (std::size_t m = 0; m < n; ++m) chord[m] = v.gz[m] / v.z[m];
    }
    return relaxed_upper_bound(psi, v.z, chord, budget, power_budget, floor_pt);
  };
  std::vector<Vertex> pool;
  std::priority_queue<Entry> heap;
  auto push = [&](Vertex v, double parent_bound) {
    if (!all_at_least(v.z, floor)) return;
    if (options.dominance_filter) {
      for (const auto& w : pool)
        if (!w.z.empty() && dominated_by(v.z, w.z)) return;
    }
    auto b = bound_of(v);
    if (b.value == kNegInf) return;
    v.hint = std::move(b.point);
    heap.push({std::min(b.value, parent_bound), pool.size(), lower});
    pool.push_back(std::move(v));
  };

  {
    Vertex v0;
    v0.z = initial_vertex(region, jammer_power, options.root_tol);
    for (std::size_t n = 0; n < v0.z.size(); ++n)
      v0.gz.push_back(region.hop(n).value(v0.z[n] / jammer_power));
    push(std::move(v0), std::numeric_limits<double>::infinity());
  }

  PolyblockResult res;
  res.jammer_power = jammer_power;
  std::vector<double> incumbent;
  bool converged = false;
  std::size_t k = 0;
  while (k < options.max_iterations) {
    if (heap.empty()) {
      // every box left was shown unable to beat the incumbent
      if (std::isfinite(lower)) {
        upper = lower;
        converged = true;
        if (options.record_trace) res.trace.push_back({k, upper, lower});
      }
      break;
    }
    const Entry top = heap.top();
    heap.pop();
    if (reduce && top.reduced_at < lower && top.u > lower) {
      // tighten with the newer incumbent before committing to this box
      auto b = bound_of(pool[top.id]);
      const double u = std::min(b.value, top.u);
      if (u < top.u) {
        if (u > kNegInf) {
          pool[top.id].hint = std::move(b.point);
          heap.push({u, top.id, lower});
        } else {
          pool[top.id] = Vertex{};
        }
        continue;
      }
    }
    ++k;
    Vertex top_v = std::move(pool[top.id]);
    pool[top.id] = Vertex{};
    const auto& z = top_v.z;
    upper = std::max(top.u, lower);

    auto proj = project_to_boundary(z, region, jammer_power, options.root_tol);
    auto offer = [&](const std::vector<double>& p) {
      const double u_p = objective(psi, p);
      if (u_p > lower) {
        lower = u_p;
        incumbent = p;
      }
    };
    offer(proj.point);
    if (relaxed && options.relaxed_cuts && !top_v.hint.empty()) {
      auto alt = project_to_boundary(top_v.hint, region, jammer_power,
                                     options.root_tol);
      offer(alt.point);
      if (alt.delta < 1.0) proj = std::move(alt);
    }
    upper = std::max(upper, lower);
    if (options.record_trace) res.trace.push_back({k, upper, lower});
    const double tol =
        options.relative_eta ? options.eta * std::abs(lower) : options.eta;
    if (upper - lower <= tol) {
      converged = true;
      break;
    }
    if (upper <= options.cutoff) {
      converged = true;
      res.pruned = true;
      break;
    }
    auto children = generate_vertices(z, proj.point);
    for (std::size_t n = 0; n < children.size(); ++n) {
      Vertex child{std::move(children[n]), top_v.gz, {}};
      child.gz[n] = region.hop(n).value(proj.point[n] / jammer_power);
      push(std::move(child), top.u);
    }
  }

  res.upper_bound = upper;
  res.lower_bound = lower;
  res.vertex_count = heap.size();
  res.solution.solver = SolverKind::polyblock;
  res.solution.iterations = k;
  res.solution.converged = converged;
  res.solution.jammer_power = jammer_power;
  if (incumbent.empty() || !std::isfinite(lower)) {
    res.solution.feasible = false;
    return res;
  }
  res.solution.powers = incumbent;
  res.solution.achieved_cop = cop(psi, incumbent);
  res.solution.achieved_sop = region.sop(incumbent, jammer_power);
  res.solution.feasible = region.check(incumbent, jammer_power).feasible;
  return res;
}

JammerSearchResult solve_with_jammer_search(const FeasibleRegion& region,
                                            std::span<const double> grid,
                                            const PolyblockOptions& options,
                                            const JammerSearchOptions& search,
                                            Exec exec) {
  if (grid.empty()) throw ModelError("empty jammer power grid");
  JammerSearchResult out;
  out.per_point.resize(grid.size());
  const auto n = static_cast<long>(grid.size());
  auto sweep = [&](const PolyblockOptions& opts) {
    if (exec == Exec::serial) {
      for (long i = 0; i < n; ++i)
        out.per_point[i] = polyblock_solve(region, grid[i], opts);
    } else {
#pragma omp parallel for schedule(dynamic, 1)
      for (long i = 0; i < n; ++i)
        out.per_point[i] = polyblock_solve(region, grid[i], opts);
    }
  };
  PolyblockOptions full = options;
  if (search.probe_iterations > 0) {
    PolyblockOptions probe = options;
    probe.max_iterations = search.probe_iterations;
    probe.record_trace = false;
    sweep(probe);
    for (const auto& r : out.per_point)
      if (r.solution.feasible) full.cutoff = std::max(full.cutoff, r.lower_bound);
  }
  sweep(full);
  bool found = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& r = out.per_point[i];
    if (!r.solution.feasible) continue;
    if (!found || r.lower_bound > out.best.lower_bound) {
      out.best = r;
      out.best_index = i;
      found = true;
    }
  }
  if (!found) {
    out.best = PolyblockResult{};
    out.best.solution.feasible = false;
    out.best.solution.solver = SolverKind::polyblock;
  }
  return out;
}

std::vector<double> jammer_grid(double total_power, std::size_t count,
                                GridSpacing spacing) {
  if (count == 0) throw ModelError("grid needs at least one point");
  if (!(total_power > 0.0)) throw ModelError("total power must be positive");
  std::vector<double> g(count);
  if (spacing == GridSpacing::linear) {
    for (std::size_t i = 0; i < count; ++i)
      g[i] = total_power * double(i + 1) / double(count + 1);
    return g;
  }
  if (count == 1) return {1e-3 * total_power};
  const double a = std::log(1e-3), b = std::log(0.99);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = total_power * std::exp(a + (b - a) * double(i) / double(count - 1));
  return g;
}

}  // namespace secroute
