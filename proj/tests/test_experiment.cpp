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
#include <sstream>
#include <string>

#include "secroute/experiment.hpp"
#include "support.hpp"

using namespace secroute;

namespace {

ExperimentConfig parsed(const std::string& text) {
  ExperimentConfig c;
  const auto d = parse_config(text, c);
  REQUIRE_FALSE(has_errors(d));
  return c;
}

bool mentions(const std::vector<Diagnostic>& d, const std::string& field,
              const std::string& text) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) {
    return x.field == field && x.message.find(text) != std::string::npos;
  });
}

std::string csv_of(const RunOutput& out) {
  std::ostringstream os;
  write_csv(os, out);
  return os.str();
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults validate cleanly") {
  const ExperimentConfig c;
  CHECK(validate(c).empty());
  CHECK(c.params.gamma_c == doctest::Approx(db_to_linear(0.8)));
  CHECK(c.eve_region().area() == 160000.0);
  CHECK(c.jammer() == Point{10, 10});
}

TEST_CASE("INI parsing") {
  const auto c = parsed(
      "[system]\nzeta = 0.3\nlambda_e = 2e-4\ngamma_c_db = 3\n"
      "[geometry]\nnodes = 12\npair = first_last\njammer_x = 5\njammer_y = 6\n"
      "[solver]\nkind = sca\njamming = on\nsca_starts = 3\n"
      "[sweep]\nvariable = zeta\nvalues = 0.1, 0.5,0.9\n"
      "[run]\nlayouts = 4\ntrials = 1000\nseed = 99\n");
  CHECK(c.params.zeta == 0.3);
  CHECK(c.params.lambda_e == 2e-4);
  CHECK(c.params.gamma_c == doctest::Approx(std::pow(10.0, 0.3)));
  CHECK(c.nodes == 12);
  CHECK(c.pair == PairRule::first_last);
  CHECK(c.jammer() == Point{5, 6});
  CHECK(c.solver == SolverKind::sca);
  CHECK(c.jamming);
  CHECK(c.sweep == SweepVariable::zeta);
  CHECK(c.sweep_values == std::vector<double>{0.1, 0.5, 0.9});
  CHECK(c.at(0.9).params.zeta == 0.9);
  CHECK(c.layouts == 4);
  CHECK(c.seed == 99);
  CHECK(validate(c).empty());
}

TEST_CASE("parse errors") {
  ExperimentConfig c;
  auto d = parse_config("[system]\nzeta = abc\nbogus = 1\n[nowhere]\nx = 1\n", c);
  CHECK(has_errors(d));
  CHECK(mentions(d, "system.zeta", "not a number"));
  CHECK(mentions(d, "system.bogus", "unknown setting"));
  CHECK(mentions(d, "nowhere.x", "unknown setting"));
  d = parse_config("[system\nzeta = 0.2\n", c);
  CHECK(has_errors(d));
}

TEST_CASE("range checks") {
  ExperimentConfig c;
  c.params.zeta = 1.5;
  CHECK(mentions(validate(c), "system.zeta", "zeta outside (0,1)"));
  c = ExperimentConfig{};
  c.params.lambda_e = -1e-4;
  CHECK(has_errors(validate(c)));
  CHECK(mentions(validate(c), "system.lambda_e", "lambda_e"));
  c.params.lambda_e = 0.0;
  CHECK(has_errors(validate(c)));
  c = ExperimentConfig{};
  c.nodes = 1;
  CHECK(mentions(validate(c), "geometry.nodes", "at least 2"));
  c = ExperimentConfig{};
  c.sweep = SweepVariable::zeta;
  c.sweep_values = {0.5, 1.2};
  CHECK(mentions(validate(c), "sweep.values", "1.2"));
}

TEST_CASE("solver and jamming must agree") {
  ExperimentConfig c;
  c.jamming = true;
  CHECK(mentions(validate(c), "solver.kind", "jamming needs"));
  c.solver = SolverKind::polyblock;
  CHECK(validate(c).empty());
  c.jamming = false;
  CHECK(has_errors(validate(c)));
}

TEST_CASE("costly settings warn without failing") {
  ExperimentConfig c;
  c.trials = 10;
  c.eve_side = 2e4;
  const auto d = validate(c);
  CHECK_FALSE(has_errors(d));
  CHECK(mentions(d, "run.trials", "fewer than 100"));
  CHECK(mentions(d, "geometry.eve_side", "large"));
}

TEST_CASE("config hash follows the content") {
  ExperimentConfig a, b;
  CHECK(a.hash() == b.hash());
  b.params.zeta = 0.4;
  CHECK(a.hash() != b.hash());
  b = a;
  b.seed = 2;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("layouts are deterministic") {
  ExperimentConfig c;
  const auto a = make_layout(c, 10, 3), b = make_layout(c, 10, 3);
  CHECK(std::equal(a.nodes().begin(), a.nodes().end(), b.nodes().begin()));
  const auto far = farthest_pair(a.nodes());
  CHECK(a.source() == far.first);
  CHECK(a.destination() == far.second);
  c.pair = PairRule::first_last;
  const auto f = make_layout(c, 10, 3);
  CHECK(f.source() == 0);
  CHECK(f.destination() == 9);
}

TEST_CASE("fixed endpoints share relays across node counts") {
  ExperimentConfig c;
  c.pair = PairRule::fixed;
  const auto small = make_layout(c, 5, 2), big = make_layout(c, 12, 2);
  CHECK(small.nodes().front() == Point{0, 0});
  CHECK(small.nodes().back() == Point{20, 20});
  CHECK(big.source() == 0);
  CHECK(big.destination() == 11);
  CHECK(std::equal(small.nodes().begin() + 1, small.nodes().end() - 1,
                   big.nodes().begin() + 1));
  const auto p = parsed("[geometry]\npair = fixed\nsource_x = 1\nsource_y = 2\n"
                        "destination_x = 19\ndestination_y = 3\n");
  CHECK(p.endpoints().first == Point{1, 2});
  CHECK(p.endpoints().second == Point{19, 3});
  const auto q = parsed("[geometry]\npair = fixed\nsource_x = 1\n");
  CHECK(mentions(validate(q), "geometry.source", "set both coordinates"));
}

TEST_CASE("pipeline rows, CSV header and audit") {
  ExperimentConfig c;
  c.sweep = SweepVariable::zeta;
  c.sweep_values = {0.2, 0.6};
  c.layouts = 5;
  c.trials = 2000;
  c.seed = 17;
  const auto run = run_experiment(c);
  REQUIRE(run.rows.size() == 10);
  for (const auto& r : run.rows) {
    CHECK(r.ok());
    CHECK(r.sop == doctest::Approx(r.sweep_value).epsilon(1e-12));
    CHECK(r.mc_cop.has_value());
  }
  // same layout, looser budget: lower COP, same route
  for (std::size_t l = 0; l < 5; ++l) {
    CHECK(run.rows[5 + l].cop < run.rows[l].cop);
    CHECK(run.rows[5 + l].route == run.rows[l].route);
  }
  const auto text = csv_of(run);
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  CHECK(line == "# secroute 1.0.0");
  std::getline(is, line);
  CHECK(line == "# seed=17");
  std::getline(is, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);

  std::istringstream audit_in(text);
  const auto rep = audit_csv(c, audit_in);
  CHECK(rep.rows == 10);
  CHECK(rep.mismatches == 0);

  // overwrite the cop cell of the first data row
  std::string tampered;
  {
    std::istringstream in(text);
    int cop_col = -1;
    bool done = false;
    while (std::getline(in, line)) {
      if (line[0] != '#' && (cop_col < 0 || !done)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (cop_col < 0) {
          cop_col = int(std::find(cells.begin(), cells.end(), "cop") - cells.begin());
        } else {
          cells[cop_col] = "0.5";
          line.clear();
          for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
          done = true;
        }
      }
      tampered += line + "\n";
    }
  }
  std::istringstream bad(tampered);
  CHECK(audit_csv(c, bad).mismatches >= 1);
}

TEST_CASE("runs are bit-identical across execution modes") {
  ExperimentConfig c;
  c.layouts = 6;
  c.trials = 1000;
  const auto a = csv_of(run_experiment(c, Exec::parallel));
  const auto b = csv_of(run_experiment(c, Exec::serial));
  const auto again = csv_of(run_experiment(c, Exec::parallel));
  CHECK(a == b);
  CHECK(a == again);
}

TEST_CASE("jamming rows") {
  ExperimentConfig c;
  c.jamming = true;
  c.solver = SolverKind::sca;
  c.sca_starts = 2;
  c.layouts = 2;
  c.quadrature.order = 6;
  c.quadrature.rel_tol = 1e-5;
  const auto run = run_experiment(c);
  for (const auto& r : run.rows) {
    CHECK(r.ok());
    REQUIRE(r.solution.jammer_power.has_value());
    CHECK(r.sop <= c.params.zeta * (1 + 1e-9));
    double total = *r.solution.jammer_power;
    for (double p : r.solution.powers) total += p;
    CHECK(total <= c.total_power * (1 + 1e-12));
  }
}

TEST_CASE("scheme comparison") {
  ExperimentConfig c;
  c.mode = RunMode::schemes;
  c.sca_starts = 1;
  c.layouts = 4;
  c.quadrature.order = 4;
  c.quadrature.rel_tol = 1e-3;
  const auto run = run_experiment(c);
  REQUIRE(run.schemes.size() == 4);
  for (const auto& r : run.schemes) {
    CHECK(r.status == "ok");
    CHECK(r.ordered());
    CHECK(r.sop_b == doctest::Approx(c.params.zeta).epsilon(1e-12));
    CHECK(r.avg_power_c > r.avg_power_b);
  }
  CHECK(csv_of(run).find("cop_a") != std::string::npos);
}

TEST_CASE("hop histogram") {
  ExperimentConfig c;
  c.mode = RunMode::hops;
  c.sweep = SweepVariable::nodes;
  c.sweep_values = {5, 20};
  c.layouts = 300;
  const auto run = run_experiment(c);
  REQUIRE(run.histograms.size() == 2);
  for (const auto& h : run.histograms) {
    CHECK(h.total == 300);
    CHECK(h.failures == 0);
  }
  auto mean = [](const HopHistogram& h) {
    double s = 0;
    for (std::size_t k = 0; k < h.counts.size(); ++k) s += double(k * h.counts[k]);
    return s / double(h.total);
  };
  CHECK(mean(run.histograms[1]) > mean(run.histograms[0]));
}

TEST_CASE("summaries") {
  ExperimentConfig c;
  c.pair = PairRule::fixed;
  c.sweep = SweepVariable::nodes;
  c.sweep_values = {5, 10, 20};
  c.layouts = 200;
  const auto s = summarize(run_experiment(c));
  REQUIRE(s.size() == 3);
  CHECK(s[0].rows == 200);
  CHECK(s[1].mean_cop < s[0].mean_cop);
  CHECK(s[2].mean_cop < s[1].mean_cop);
  CHECK(s[2].mean_avg_power < s[0].mean_avg_power);
}

TEST_CASE("invalid configs do not run") {
  ExperimentConfig c;
  c.params.zeta = 2.0;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  try {
    run_experiment(c);
  } catch (const ConfigError& e) {
    CHECK(mentions(e.diagnostics(), "system.zeta", "zeta outside (0,1)"));
  }
}

}  // TEST_SUITE
