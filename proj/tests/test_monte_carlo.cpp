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

#include <cmath>
#include <vector>

#include "secroute/monte_carlo.hpp"
#include "secroute/power_allocation.hpp"
#include "support.hpp"

using namespace secroute;

namespace {

struct Case {
  Route route;
  std::vector<double> powers;
};

Case optimal_case(std::size_t hops, std::uint64_t index,
                  const SystemParams& prm = default_system_params()) {
  auto g = test::rng(600 + index);
  auto route = test::random_route(hops, prm, g);
  auto p = allocate_powers(route, derive_constants(prm), prm.alpha).powers;
  return {std::move(route), std::move(p)};
}

}  // namespace

TEST_SUITE("monte_carlo") {

TEST_CASE("binomial report") {
  const auto r = SimReport::binomial(250, 1000, 3);
  CHECK(r.estimate == 0.25);
  CHECK(r.std_error == doctest::Approx(std::sqrt(0.25 * 0.75 / 1000)));
  CHECK(r.agrees_with(0.25 + 2.9 * r.std_error));
  CHECK(r.agrees_with(0.25 - 2.9 * r.std_error));
  CHECK_FALSE(r.agrees_with(0.25 - 3.1 * r.std_error));
  // Binomial error at the tested value: 3 * sqrt(0.2925 * 0.7075 / 1000).
  CHECK(r.agrees_with(0.2925));
  CHECK_FALSE(r.agrees_with(0.2935));
  const auto z = SimReport::binomial(0, 1000, 3);
  CHECK(z.agrees_with(0.0));
  CHECK(z.agrees_with(1e-6));
  CHECK_FALSE(z.agrees_with(0.02));
}

TEST_CASE("vanishing threshold never drops the link") {
  auto prm = default_system_params();
  prm.gamma_c = 1e-30;
  auto g = test::rng(61);
  const auto route = test::random_route(3, prm, g);
  const std::vector<double> p(3, 1e6);
  CHECK(simulate_cop(route, p, prm, 100000, 1).estimate == 0.0);
}

TEST_CASE("half-life hop") {
  const auto prm = default_system_params();
  auto g = test::rng(60);
  const auto route = test::random_route(1, prm, g);
  const std::vector<double> p{route.psi()[0] / std::log(2.0)};
  const auto r = simulate_cop(route, p, prm, 100000, 2);
  CHECK(r.agrees_with(0.5));
}

TEST_CASE("COP simulation matches the closed form") {
  const auto prm = default_system_params();
  for (std::uint64_t i = 0; i < 8; ++i) {
    const auto c = optimal_case(1 + i % 5, i);
    const auto r = simulate_cop(c.route, c.powers, prm, 100000, 100 + i);
    CHECK(r.agrees_with(cop(c.route, c.powers)));
  }
}

TEST_CASE("simulation is deterministic and thread independent") {
  const auto prm = default_system_params();
  const auto c = optimal_case(4, 1);
  const auto a = simulate_cop(c.route, c.powers, prm, 30000, 7, Exec::serial);
  const auto b = simulate_cop(c.route, c.powers, prm, 30000, 7, Exec::parallel);
  CHECK(a.events == b.events);
  const auto s1 = simulate_sop(c.route, c.powers, prm, test::default_eves(), 20000, 8,
                               {}, Exec::serial);
  const auto s2 = simulate_sop(c.route, c.powers, prm, test::default_eves(), 20000, 8,
                               {}, Exec::parallel);
  CHECK(s1.events == s2.events);
  const auto s3 = simulate_sop(c.route, c.powers, prm, test::default_eves(), 20000, 9);
  CHECK(s3.events != s1.events);
}

TEST_CASE("no eavesdroppers, no leak") {
  auto prm = default_system_params();
  const auto c = optimal_case(3, 2);
  prm.lambda_e = 0.0;
  CHECK(simulate_sop(c.route, c.powers, prm, test::default_eves(), 10000, 1).estimate == 0.0);
}

TEST_CASE("SOP simulation matches the closed form") {
  const auto prm = default_system_params();
  const double w = omega(prm);
  for (std::uint64_t i = 0; i < 4; ++i) {
    const auto c = optimal_case(2 + i, 10 + i);
    const auto r = simulate_sop(c.route, c.powers, prm, test::default_eves(), 100000, 200 + i);
    CHECK(r.agrees_with(sop(w, prm.alpha, c.powers)));
  }
}

TEST_CASE("one field per trial leaks no more than fresh fields per hop") {
  const auto prm = default_system_params();
  const auto c = optimal_case(4, 20);
  SopSimOptions common;
  common.resample_per_hop = false;
  const auto shared = simulate_sop(c.route, c.powers, prm, test::default_eves(), 100000, 5, common);
  const auto fresh = simulate_sop(c.route, c.powers, prm, test::default_eves(), 100000, 6);
  CHECK(shared.estimate <= fresh.estimate + 3 * std::hypot(shared.std_error, fresh.std_error));
}

TEST_CASE("jamming SOP simulation") {
  const auto prm = default_system_params();
  const auto c = optimal_case(3, 30);
  const Point jam{10, 10};
  FeasibleRegion fr(c.route, prm, test::default_eves(), test::test_jammer(jam));
  std::vector<double> p(3, 5e7);
  const double pj = 9e9;
  const auto r = simulate_sop_jamming(c.route, p, pj, jam, prm, test::default_eves(),
                                      100000, 31);
  CHECK(r.agrees_with(sop_jamming(fr, p, pj)));

  SopSimOptions noisy;
  noisy.include_noise = true;
  const std::vector<double> small(3, 1e3);
  const auto quiet = simulate_sop_jamming(c.route, small, 1e3, jam, prm,
                                          test::default_eves(), 100000, 32);
  const auto loud = simulate_sop_jamming(c.route, small, 1e3, jam, prm,
                                         test::default_eves(), 100000, 33, noisy);
  CHECK(loud.estimate <= quiet.estimate + 3 * std::hypot(loud.std_error, quiet.std_error));
  CHECK(loud.estimate < quiet.estimate);

  const auto drowned = simulate_sop_jamming(c.route, p, 1e30, jam, prm,
                                            test::default_eves(), 20000, 34);
  CHECK(drowned.estimate == 0.0);
  CHECK_THROWS_AS(simulate_sop_jamming(c.route, p, 0.0, jam, prm, test::default_eves(), 10, 1),
                  ModelError);
}

TEST_CASE("hop integral sampling is thread independent") {
  const auto j = test::test_jammer();
  HopIntegral h({4, 4}, j.position, test::default_eves(), 1.0, 4.0, j.quadrature,
                j.ratio_min, j.ratio_max, j.ratio_probes);
  const auto a = integrate_hop_mc(h, 0.01, 100000, 4, Exec::serial);
  const auto b = integrate_hop_mc(h, 0.01, 100000, 4, Exec::parallel);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("argument checks") {
  const auto prm = default_system_params();
  const auto c = optimal_case(2, 40);
  CHECK_THROWS_AS(simulate_cop(c.route, c.powers, prm, 0, 1), ModelError);
  const std::vector<double> short_p{1.0};
  CHECK_THROWS_AS(simulate_cop(c.route, short_p, prm, 10, 1), ModelError);
}

}  // TEST_SUITE
