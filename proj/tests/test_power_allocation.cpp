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

#include <doctest.h>

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <vector>

#include "secroute/power_allocation.hpp"
#include "support.hpp"

using namespace secroute;

namespace {

DerivedConstants half_budget() {
  DerivedConstants k;
  k.omega = 2.78416399841585392e-4;
  k.sop_budget = std::log(2.0);
  return k;
}

}  // namespace

TEST_SUITE("power_allocation") {

TEST_CASE("single hop takes the whole SOP budget") {
  for (double psi : {1.0, 1.20226e4, 3e7}) {
    const std::vector<double> v{psi};
    const auto p = optimal_powers(v, half_budget(), 4.0);
    CHECK(p[0] == doctest::Approx(6198138.76876693867).epsilon(1e-12));
  }
}

TEST_CASE("equal hops split evenly") {
  const std::vector<double> v{5.0, 5.0};
  const auto p = optimal_powers(v, half_budget(), 4.0);
  CHECK(p[0] == doctest::Approx(1549534.69219173467).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(p[0]).epsilon(1e-15));
}

TEST_CASE("two hops against a line-search oracle") {
  // sqrt(P1) + sqrt(P2) = eps/omega; minimize 1/P1 + 16/P2 over s = sqrt(P1)
  const auto k = half_budget();
  const double K = k.sop_budget / k.omega;
  auto f = [&](double s) { return 1.0 / (s * s) + 16.0 / ((K - s) * (K - s)); };
  double best_s = 0.0, best = INFINITY;
  for (int i = 1; i < 100000; ++i) {
    const double s = K * i / 100000.0;
    if (f(s) < best) best = f(s), best_s = s;
  }
  const auto [s_star, f_star] = boost::math::tools::brent_find_minima(
      f, best_s - K * 1e-5, best_s + K * 1e-5, 52);
  const double oracle = -std::expm1(-f_star);

  const std::vector<double> v{1.0, 16.0};
  const auto p = optimal_powers(v, k, 4.0);
  const double got = cop(v, p);
  CHECK(std::abs(got - oracle) / oracle < 1e-3);
  CHECK(std::sqrt(p[0]) == doctest::Approx(s_star).epsilon(1e-6));
}

TEST_CASE("SOP constraint is active") {
  auto g = test::rng(20);
  std::uniform_real_distribution<double> zeta(0.01, 0.99);
  std::uniform_int_distribution<int> hops(1, 8);
  for (int t = 0; t < 300; ++t) {
    auto prm = default_system_params();
    prm.zeta = zeta(g);
    const auto route = test::random_route(hops(g), prm, g);
    const auto k = derive_constants(prm);
    const auto sol = allocate_powers(route, k, prm.alpha);
    double s = 0.0;
    for (double x : sol.powers) s += std::sqrt(x);
    CHECK(k.omega * s == doctest::Approx(k.sop_budget).epsilon(1e-12));
    CHECK(sol.achieved_sop == doctest::Approx(prm.zeta).epsilon(1e-12));
  }
}

TEST_CASE("min COP equals COP of the allocated powers") {
  auto g = test::rng(21);
  const auto prm = default_system_params();
  const auto k = derive_constants(prm);
  for (int t = 0; t < 100; ++t) {
    const auto route = test::random_route(1 + t % 6, prm, g);
    const double direct = cop(route, allocate_powers(route, k, prm.alpha).powers);
    CHECK(test::rel_diff(min_cop_for_route(route, k, prm.alpha), direct) < 1e-12);
  }
  const std::vector<double> v{1.20226e4};
  CHECK(min_cop_for_route(v, half_budget(), 4.0) ==
        doctest::Approx(1.93783130659784672e-3).epsilon(1e-12));
}

TEST_CASE("looser SOP budget lowers COP") {
  auto g = test::rng(22);
  const auto prm = default_system_params();
  for (int t = 0; t < 50; ++t) {
    const auto route = test::random_route(3, prm, g);
    auto k = derive_constants(prm);
    const double before = min_cop_for_route(route, k, prm.alpha);
    k.sop_budget *= 2;
    CHECK(min_cop_for_route(route, k, prm.alpha) < before);
  }
}

TEST_CASE("optimal powers beat perturbations on the SOP manifold") {
  auto g = test::rng(23);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  const auto prm = default_system_params();
  const auto k = derive_constants(prm);
  for (int t = 0; t < 50; ++t) {
    const auto route = test::random_route(4, prm, g);
    const auto psi = route.psi();
    const auto p = optimal_powers(psi, k, prm.alpha);
    std::vector<double> s(p.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) sum += s[n] = std::sqrt(p[n]) * (1 + u(g));
    const double scale = (k.sop_budget / k.omega) / sum;
    std::vector<double> q(p.size());
    for (std::size_t n = 0; n < p.size(); ++n) q[n] = std::pow(s[n] * scale, 2);
    CHECK(cop(psi, q) >= cop(psi, p));
  }
}

TEST_CASE("equal powers at matched total are never better") {
  auto g = test::rng(24);
  const auto prm = default_system_params();
  const auto k = derive_constants(prm);
  for (int t = 0; t < 100; ++t) {
    const auto route = test::random_route(1 + t % 5, prm, g);
    const auto b = allocate_powers(route, k, prm.alpha);
    const auto a = equal_power_allocation(route, b.total_power(), k, prm.alpha);
    CHECK(a.total_power() == doctest::Approx(b.total_power()).epsilon(1e-14));
    CHECK(a.achieved_cop >= b.achieved_cop * (1 - 1e-14));
    // same total power spread evenly leaks at least as much
    CHECK(a.achieved_sop >= b.achieved_sop * (1 - 1e-12));
  }
}

TEST_CASE("SOP for a target COP inverts the minimum COP") {
  auto g = test::rng(25);
  const auto prm = default_system_params();
  const auto k = derive_constants(prm);
  for (int t = 0; t < 50; ++t) {
    const auto route = test::random_route(1 + t % 4, prm, g);
    const auto psi = route.psi();
    const double target = min_cop_for_route(psi, k, prm.alpha);
    CHECK(sop_for_target_cop(psi, k.omega, prm.alpha, target) ==
          doctest::Approx(prm.zeta).epsilon(1e-10));
  }
  const std::vector<double> v{1.0};
  CHECK_THROWS_AS(sop_for_target_cop(v, 1e-4, 4.0, 1.0), ModelError);
}

TEST_CASE("bad inputs") {
  const std::vector<double> none;
  CHECK_THROWS_AS(optimal_powers(none, half_budget(), 4.0), ModelError);
  const std::vector<double> neg{-1.0};
  CHECK_THROWS_AS(optimal_powers(neg, half_budget(), 4.0), ModelError);
  DerivedConstants zero;
  const std::vector<double> v{1.0};
  CHECK_THROWS_AS(optimal_powers(v, zero, 4.0), ModelError);
}

}  // TEST_SUITE
