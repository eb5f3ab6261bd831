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
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "secroute/geometry.hpp"
#include "secroute/jamming.hpp"
#include "secroute/outage.hpp"
#include "secroute/rng.hpp"

#include <boost/math/tools/minima.hpp>

namespace secroute::test {

inline Engine rng(std::uint64_t index) {
  return make_stream(20260117, StreamTag::test, index);
}

inline Region default_nodes() { return Region(0, 20, 0, 20); }
inline Region default_eves() { return Region::centered_square({10, 10}, 400); }

/// Cheaper rule than the library default; enough for property checks.
inline JammerConfig test_jammer(Point at = {10, 10}) {
  JammerConfig j;
  j.position = at;
  j.quadrature.order = 6;
  j.quadrature.rel_tol = 1e-5;
  return j;
}

inline std::vector<Point> random_points(std::size_t n, Engine& g,
                                        const Region& r = default_nodes()) {
  return sample_uniform_points(r, n, g);
}

/// Route through `hops + 1` random points of the default node region.
inline Route random_route(std::size_t hops, const SystemParams& p, Engine& g) {
  for (;;) {
    auto pts = random_points(hops + 1, g);
    try {
      return Route::through_points(pts, p);
    } catch (const ModelError&) {
    }
  }
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

struct GridOracle {
  double best = -INFINITY;  // max U found
  double p1 = 0.0, p2 = 0.0;
  double resolution = 0.0;  // largest U step between neighbouring grid points near the max
};

/// Largest P_2 with (P_1, P_2) feasible at `pj`, by plain bisection.
inline double max_second_power(const FeasibleRegion& fr, double pj, double p1) {
  const double budget = fr.total_power() - pj - p1;
  if (budget <= 0.0) return 0.0;
  const double room = fr.integral_budget() - fr.hop(0).value(p1 / pj);
  if (room <= 0.0) return 0.0;
  if (fr.hop(1).value(budget / pj) <= room) return budget;
  double lo = 0.0, hi = budget;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (fr.hop(1).value(mid / pj) <= room ? lo : hi) = mid;
  }
  return lo;
}

/// Dense search of max -psi1/P1 - psi2/P2 over the two-hop power region at
/// fixed P_J: log grid in P_1 along the upper boundary, then Brent refinement.
inline GridOracle grid_oracle_two_hops(const FeasibleRegion& fr, double pj,
                                       int points = 800) {
  const auto psi = fr.psi();
  auto u = [&](double p1) {
    const double p2 = max_second_power(fr, pj, p1);
    if (p2 <= 0.0) return -std::numeric_limits<double>::infinity();
    return -psi[0] / p1 - psi[1] / p2;
  };
  const double hi = fr.total_power() - pj;
  const double lo = hi * 1e-9;
  std::vector<double> xs(points), us(points);
  GridOracle o;
  int arg = 0;
  for (int i = 0; i < points; ++i) {
    xs[i] = lo * std::pow(hi / lo, double(i) / (points - 1));
    us[i] = u(xs[i]);
    if (us[i] > us[arg]) arg = i;
  }
  const int a = std::max(0, arg - 1), b = std::min(points - 1, arg + 1);
  o.resolution = std::max(std::abs(us[arg] - us[a]), std::abs(us[arg] - us[b]));
  const auto [x, fx] = boost::math::tools::brent_find_minima(
      [&](double lx) { return -u(std::exp(lx)); }, std::log(xs[a]),
      std::log(xs[b]), 40);
  o.best = std::max(us[arg], -fx);
  o.p1 = -fx > us[arg] ? std::exp(x) : xs[arg];
  o.p2 = max_second_power(fr, pj, o.p1);
  return o;
}

}  // namespace secroute::test
