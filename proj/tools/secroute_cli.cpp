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

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "secroute/experiment.hpp"

namespace {

using namespace secroute;

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNotConverged = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::uint64_t> trials;
  std::optional<std::size_t> layouts;
  std::string solver;
  std::string jam;
  bool strict = false;
  std::string audit;
};

void apply_flags(const Flags& f, ExperimentConfig& c) {
  if (f.seed) c.seed = *f.seed;
  if (f.trials) c.trials = *f.trials;
  if (f.layouts) c.layouts = *f.layouts;
  if (!f.out.empty()) c.output = f.out;
  if (f.strict) c.strict = true;
  if (f.solver == "closed") c.solver = SolverKind::closed_form;
  else if (f.solver == "polyblock") c.solver = SolverKind::polyblock;
  else if (f.solver == "sca") c.solver = SolverKind::sca;
  if (f.jam == "on") c.jamming = true;
  else if (f.jam == "off") c.jamming = false;
}

ExperimentConfig base_config(const Flags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  apply_flags(f, c);
  return c;
}

void print(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << to_string(d) << "\n";
}

int execute(ExperimentConfig c) {
  auto diags = validate(c);
  print(diags);
  if (has_errors(diags)) return kConfigError;

  const auto t0 = std::chrono::steady_clock::now();
  const RunOutput run = run_experiment(c);
  if (c.output.empty() || c.output == "-") {
    write_csv(std::cout, run);
  } else {
    std::ofstream os(c.output);
    if (!os) {
      std::cerr << "error: cannot write " << c.output << "\n";
      return kConfigError;
    }
    write_csv(os, run);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::size_t rows = run.rows.size() + run.schemes.size() + run.histograms.size();
  std::cerr << "secroute: " << rows << " rows in " << secs << " s\n";
  if (c.strict && !run.all_converged) {
    std::cerr << "secroute: a solver did not converge (strict mode)\n";
    return kNotConverged;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure routing with outage constraints and friendly jamming"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "INI configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Master seed");
    sub->add_option("--out", f.out, "Output CSV (stdout when omitted)");
    sub->add_option("--trials", f.trials, "Monte Carlo trials per row");
    sub->add_option("--layouts", f.layouts, "Random layouts per sweep point");
    sub->add_flag("--strict", f.strict, "Exit with 2 when a solver does not converge");
  };
  auto solver_flags = [&](CLI::App* sub) {
    sub->add_option("--solver", f.solver, "Power solver")
        ->check(CLI::IsMember({"closed", "polyblock", "sca"}));
    sub->add_option("--jam", f.jam, "Friendly jamming")
        ->check(CLI::IsMember({"on", "off"}));
  };

  auto* route = app.add_subcommand("route", "Secure route and closed-form powers");
  auto* jam_opt = app.add_subcommand("jam-opt", "Jamming powers by polyblock search over P_J");
  auto* jam_sca = app.add_subcommand("jam-sca", "Jamming powers by multi-start SCA");
  auto* simulate = app.add_subcommand("simulate", "Solve and check by Monte Carlo");
  auto* sweep = app.add_subcommand("sweep", "Run the configured sweep");
  auto* validate_cmd = app.add_subcommand("validate", "Check a configuration");
  for (auto* s : {route, jam_opt, jam_sca, simulate, sweep, validate_cmd}) common(s);
  for (auto* s : {simulate, sweep}) solver_flags(s);
  validate_cmd->add_option("--audit", f.audit, "Recompute COP/SOP of a pipeline CSV")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*validate_cmd) {
      ExperimentConfig c;
      std::vector<Diagnostic> diags;
      if (!f.config.empty()) {
        std::ifstream in(f.config);
        std::stringstream buf;
        buf << in.rdbuf();
        diags = parse_config(buf.str(), c);
      }
      apply_flags(f, c);
      auto more = validate(c);
      diags.insert(diags.end(), more.begin(), more.end());
      print(diags);
      if (has_errors(diags)) return kConfigError;
      if (!f.audit.empty()) {
        std::ifstream csv(f.audit);
        const auto rep = audit_csv(c, csv);
        for (const auto& m : rep.messages) std::cerr << m << "\n";
        std::cout << "audited " << rep.rows << " rows, " << rep.mismatches
                  << " mismatches\n";
        return rep.mismatches == 0 ? kOk : kConfigError;
      }
      std::cout << "configuration ok (hash " << std::hex << c.hash() << std::dec
                << ")\n";
      return kOk;
    }

    ExperimentConfig c = base_config(f);
    if (*route) {
      c.mode = RunMode::pipeline;
      c.jamming = false;
      c.solver = SolverKind::closed_form;
    } else if (*jam_opt) {
      c.mode = RunMode::pipeline;
      c.jamming = true;
      c.solver = SolverKind::polyblock;
    } else if (*jam_sca) {
      c.mode = RunMode::pipeline;
      c.jamming = true;
      c.solver = SolverKind::sca;
    } else if (*simulate) {
      c.mode = RunMode::pipeline;
      if (c.trials == 0) c.trials = 10000;
      if (c.jamming && c.solver == SolverKind::closed_form) c.solver = SolverKind::sca;
    }
    return execute(std::move(c));
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
