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

#include <algorithm>
#include <cmath>
#include <vector>

#include "secroute/polyblock.hpp"
#include "support.hpp"

using namespace secroute;

namespace {

FeasibleRegion region_for(std::size_t hops, std::uint64_t index,
                          double total_power = 1e10) {
  auto g = test::rng(700 + index);
  const auto prm = default_system_params();
  auto j = test::test_jammer();
  j.total_power = total_power;
  return FeasibleRegion(test::random_route(hops, prm, g), prm, test::default_eves(), j);
}

std::vector<double> random_feasible(const FeasibleRegion& fr, double pj,
                                    std::span<const double> box, Engine& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    std::vector<double> p(box.size());
    for (std::size_t n = 0; n < p.size(); ++n) p[n] = box[n] * std::pow(u(g), 3.0);
    if (std::all_of(p.begin(), p.end(), [](double x) { return x > 0.0; }) &&
        fr.check(p, pj).feasible)
      return p;
  }
}

}  // namespace

TEST_SUITE("polyblock") {

TEST_CASE("objective") {
  const std::vector<double> psi{2.0, 3.0, 5.0};
  CHECK(objective(psi, psi) == -3.0);
  const std::vector<double> p{1.0, 2.0, 4.0};
  const std::vector<double> p2{2.0, 4.0, 8.0};
  CHECK(objective(psi, p2) > objective(psi, p));
  const std::vector<double> q{1.0, 3.0, 3.0};
  CHECK((objective(psi, p) < objective(psi, q)) == (cop(psi, p) > cop(psi, q)));
}

TEST_CASE("initial vertex with a binding power budget") {
  const auto fr = region_for(3, 0);
  const double pj = 0.999 * fr.total_power();
  const auto z = initial_vertex(fr, pj);
  for (double v : z) CHECK(v == doctest::Approx(fr.total_power() - pj).epsilon(1e-12));
}

TEST_CASE("initial vertex dominates the region") {
  const auto fr = region_for(3, 1);
  auto g = test::rng(71);
  for (double pj : {0.5e10, 0.95e10}) {
    const auto z = initial_vertex(fr, pj);
    // z itself is outside the region
    CHECK_FALSE(fr.check(z, pj).feasible);
    const std::vector<double> box(3, fr.total_power() - pj);
    for (int t = 0; t < 1000; ++t) {
      const auto p = random_feasible(fr, pj, box, g);
      for (std::size_t n = 0; n < 3; ++n) CHECK(p[n] <= z[n]);
    }
  }
}

TEST_CASE("boundary projection") {
  const auto fr = region_for(2, 2);
  const double pj = 0.9e10;
  const std::vector<double> tiny{1.0, 1.0};
  CHECK(project_to_boundary(tiny, fr, pj).delta == 1.0);

  const auto small = region_for(2, 2, 1e3);
  const double pj_small = 0.999e3;
  const std::vector<double> v{3.0, 1.0};
  const auto b = project_to_boundary(v, small, pj_small);
  CHECK(b.delta == doctest::Approx(1.0 / 4.0).epsilon(1e-12));

  for (const auto& dir : {std::vector<double>{1e9, 1e9}, std::vector<double>{1e7, 5e9}}) {
    const auto r = project_to_boundary(dir, fr, pj);
    CHECK(r.delta < 1.0);
    CHECK(fr.check(r.point, pj).feasible);
    std::vector<double> out(r.point);
    for (auto& x : out) x *= 1.000001;
    CHECK_FALSE(fr.check(out, pj).feasible);
  }

  // power budget binding: the point must pass check() exactly
  auto g = test::rng(88);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 2000; ++t) {
    const double pjt = (0.9 + 0.0999 * u(g)) * fr.total_power();
    const double w = u(g);
    const std::vector<double> big{w * 3.7e10, (1 - w) * 2.3e10};
    const auto r = project_to_boundary(big, fr, pjt);
    CHECK(fr.check(r.point, pjt).power_slack >= 0.0);
  }
}

TEST_CASE("vertex generation") {
  const std::vector<double> z{4.0, 4.0}, r{2.0, 2.0};
  const auto v = generate_vertices(z, r);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == std::vector<double>{2.0, 4.0});
  CHECK(v[1] == std::vector<double>{4.0, 2.0});
  for (const auto& w : generate_vertices(z, z)) CHECK(w == z);
  const std::vector<double> above{5.0, 1.0};
  CHECK_THROWS_AS(generate_vertices(z, above), ModelError);
}

TEST_CASE("cutting keeps the region covered") {
  const auto fr = region_for(2, 3);
  const double pj = 0.9e10;
  const auto z = initial_vertex(fr, pj);
  auto verts = std::vector<std::vector<double>>{z};
  // a few rounds of cuts at the projection of the largest vertex
  for (int round = 0; round < 6; ++round) {
    std::sort(verts.begin(), verts.end(), [&](auto& a, auto& b) {
      return objective(fr.psi(), a) > objective(fr.psi(), b);
    });
    const auto top = verts.front();
    verts.erase(verts.begin());
    const auto r = project_to_boundary(top, fr, pj);
    for (auto& c : generate_vertices(top, r.point)) verts.push_back(c);
  }
  auto g = test::rng(72);
  for (int t = 0; t < 1000; ++t) {
    const auto p = random_feasible(fr, pj, z, g);
    const bool covered = std::any_of(verts.begin(), verts.end(), [&](auto& v) {
      return p[0] <= v[0] * (1 + 1e-12) && p[1] <= v[1] * (1 + 1e-12);
    });
    CHECK(covered);
  }
}

TEST_CASE("relaxed bound brackets the box maximum") {
  const auto fr = region_for(3, 4);
  auto g = test::rng(73);
  const double pj = 0.9e10;
  const auto z = initial_vertex(fr, pj);
  std::vector<double> chord(3);
  for (std::size_t n = 0; n < 3; ++n) chord[n] = fr.hop(n).value(z[n] / pj) / z[n];
  const auto rb = relaxed_upper_bound(fr.psi(), z, chord, fr.integral_budget(),
                                      fr.total_power() - pj);
  CHECK(rb.value <= objective(fr.psi(), z) * (1 - 1e-12));
  for (int t = 0; t < 500; ++t) {
    const auto p = random_feasible(fr, pj, z, g);
    CHECK(objective(fr.psi(), p) <= rb.value);
  }
}

TEST_CASE("single hop reaches the boundary point") {
  const auto fr = region_for(1, 5);
  const double pj = 0.9e10;
  PolyblockOptions o;
  o.eta = 1e-9;
  o.relative_eta = true;
  const auto res = polyblock_solve(fr, pj, o);
  CHECK(res.solution.converged);
  CHECK(res.solution.iterations <= 5);
  const auto z = initial_vertex(fr, pj);
  CHECK(res.solution.powers[0] == doctest::Approx(z[0]).epsilon(1e-8));
}

TEST_CASE("two hops against a dense grid search") {
  for (std::uint64_t i = 0; i < 2; ++i) {
    const auto fr = region_for(2, 10 + i);
    const double pj = 0.9e10;
    PolyblockOptions o;
    o.eta = 1e-4;
    const auto res = polyblock_solve(fr, pj, o);
    REQUIRE(res.solution.feasible);
    CHECK(res.solution.converged);
    const auto oracle = test::grid_oracle_two_hops(fr, pj, 400);
    const double u = objective(fr.psi(), res.solution.powers);
    CHECK(u >= oracle.best - o.eta - oracle.resolution);
    CHECK(u <= oracle.best + 1e-9 * std::abs(oracle.best));
    CHECK(res.upper_bound - res.lower_bound <= o.eta);
    CHECK(res.upper_bound >= oracle.best - 1e-9 * std::abs(oracle.best));
  }
}

TEST_CASE("bound traces are monotone") {
  for (auto bound : {VertexBound::relaxed, VertexBound::vertex}) {
    const auto fr = region_for(3, 6);
    PolyblockOptions o;
    o.bound = bound;
    o.eta = 1e-6;
    o.relative_eta = true;
    o.max_iterations = 300;
    const auto res = polyblock_solve(fr, 0.95e10, o);
    REQUIRE(res.trace.size() >= 2);
    for (std::size_t k = 1; k < res.trace.size(); ++k) {
      CHECK(res.trace[k].upper <= res.trace[k - 1].upper);
      CHECK(res.trace[k].lower >= res.trace[k - 1].lower);
      CHECK(res.trace[k].upper >= res.trace[k].lower);
    }
  }
}

TEST_CASE("raised lower corner") {
  const std::vector<double> psi{1.0, 4.0}, z{2.0, 2.0}, chord{1.0, 1.0};
  const auto open = relaxed_upper_bound(psi, z, chord, 10.0, 10.0);
  const std::vector<double> a{1.0, 1.0};
  const auto boxed = relaxed_upper_bound(psi, z, chord, 10.0, 10.0, a);
  CHECK(boxed.value <= open.value);
  CHECK(boxed.value >= objective(psi, z));
  const std::vector<double> over{2.5, 1.0};
  CHECK(relaxed_upper_bound(psi, z, chord, 10.0, 10.0, over).value == -INFINITY);
  CHECK(relaxed_upper_bound(psi, z, chord, 1.5, 10.0, a).value == -INFINITY);
  CHECK(relaxed_upper_bound(psi, z, chord, 10.0, 1.5, a).value == -INFINITY);
}

TEST_CASE("box reduction keeps the optimum and cuts iterations") {
  for (std::uint64_t i = 0; i < 3; ++i) {
    const auto fr = region_for(3, 20 + i);
    for (double q : {0.5, 0.95}) {
      const double pj = q * fr.total_power();
      PolyblockOptions o;
      o.eta = 1e-4;
      o.relative_eta = true;
      o.max_iterations = 20000;
      const auto reduced = polyblock_solve(fr, pj, o);
      o.reduce_boxes = false;
      o.max_iterations = 500;
      const auto plain = polyblock_solve(fr, pj, o);
      REQUIRE(reduced.solution.converged);
      CHECK(reduced.solution.feasible);
      CHECK(reduced.solution.iterations <= plain.solution.iterations);
      // each result lies inside the other's bracket
      CHECK(reduced.lower_bound <= plain.upper_bound * (1 - 1e-12));
      if (plain.solution.converged)
        CHECK(plain.lower_bound <= reduced.upper_bound * (1 - 1e-12));
      for (std::size_t k = 1; k < reduced.trace.size(); ++k) {
        CHECK(reduced.trace[k].upper <= reduced.trace[k - 1].upper);
        CHECK(reduced.trace[k].lower >= reduced.trace[k - 1].lower);
      }
    }
  }
}

TEST_CASE("plain vertex bound converges on two hops") {
  const auto fr = region_for(2, 7);
  PolyblockOptions o;
  o.bound = VertexBound::vertex;
  o.eta = 1e-3;
  o.relative_eta = true;
  const auto plain = polyblock_solve(fr, 0.9e10, o);
  o.bound = VertexBound::relaxed;
  const auto relaxed = polyblock_solve(fr, 0.9e10, o);
  CHECK(plain.solution.converged);
  CHECK(relaxed.solution.iterations <= plain.solution.iterations);
  CHECK(plain.lower_bound == doctest::Approx(relaxed.lower_bound).epsilon(2e-3));
}

TEST_CASE("cutoff prunes hopeless jammer powers") {
  const auto fr = region_for(3, 8);
  PolyblockOptions o;
  o.cutoff = 0.0;  // nothing beats U = 0
  o.eta = 1e-15;
  const auto res = polyblock_solve(fr, 0.5e10, o);
  CHECK(res.pruned);
  CHECK(res.solution.iterations == 1);
}

TEST_CASE("jammer grids") {
  const auto lin = jammer_grid(1e10, 4);
  CHECK(lin == std::vector<double>{2e9, 4e9, 6e9, 8e9});
  CHECK(jammer_grid(10.0, 1) == std::vector<double>{5.0});
  const auto lg = jammer_grid(1e10, 5, GridSpacing::log);
  CHECK(lg.front() == doctest::Approx(1e7));
  CHECK(lg.back() == doctest::Approx(0.99e10));
  CHECK(std::is_sorted(lg.begin(), lg.end()));
}

TEST_CASE("jammer search") {
  const auto fr = region_for(3, 9);
  PolyblockOptions o;
  o.record_trace = false;
  const std::vector<double> one{0.9e10};
  const auto single = solve_with_jammer_search(fr, one, o);
  const auto direct = polyblock_solve(fr, 0.9e10, o);
  CHECK(single.best.lower_bound == direct.lower_bound);
  CHECK(single.best.solution.powers == direct.solution.powers);

  const auto coarse = jammer_grid(fr.total_power(), 5);
  const auto fine = jammer_grid(fr.total_power(), 11);  // contains the coarse grid
  const auto a = solve_with_jammer_search(fr, coarse, o);
  const auto b = solve_with_jammer_search(fr, fine, o);
  CHECK(b.best.lower_bound >= a.best.lower_bound - o.eta);
  CHECK(b.best.solution.feasible);

  const auto s = solve_with_jammer_search(fr, fine, o, {}, Exec::serial);
  CHECK(s.best_index == b.best_index);
  CHECK(s.best.solution.powers == b.best.solution.powers);
}

}  // TEST_SUITE
