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

#include "secroute/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <map>
#include <mutex>

namespace secroute {

namespace {

template <unsigned N>
GaussLegendre expand() {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  GaussLegendre gl;
  // Boost stores the non-negative half; mirror it (zero appears once).
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    gl.nodes.push_back(-x[i]);
    gl.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    gl.nodes.push_back(x[i]);
    gl.weights.push_back(w[i]);
  }
  return gl;
}

GaussLegendre make_rule(int order) {
  switch (order) {
    case 2: return expand<2>();
    case 3: return expand<3>();
    case 4: return expand<4>();
    case 5: return expand<5>();
    case 6: return expand<6>();
    case 7: return expand<7>();
    case 8: return expand<8>();
    case 10: return expand<10>();
    case 12: return expand<12>();
    case 14: return expand<14>();
    case 16: return expand<16>();
    case 18: return expand<18>();
    case 20: return expand<20>();
    default: throw ModelError("unsupported Gauss-Legendre order");
  }
}

}  // namespace

const GaussLegendre& GaussLegendre::of_order(int order) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

void append_panel_rule(const Panel& panel, const GaussLegendre& gl,
                       CompositeRule& out) {
  const double hx = 0.5 * (panel.x1 - panel.x0);
  const double hy = 0.5 * (panel.y1 - panel.y0);
  const double cx = 0.5 * (panel.x1 + panel.x0);
  const double cy = 0.5 * (panel.y1 + panel.y0);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i)
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      out.points.push_back({cx + hx * gl.nodes[i], cy + hy * gl.nodes[j]});
      out.weights.push_back(hx * hy * gl.weights[i] * gl.weights[j]);
    }
}

}  // namespace secroute
