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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secroute/geometry.hpp"
#include "secroute/jamming.hpp"
#include "secroute/kernels.hpp"
#include "secroute/monte_carlo.hpp"
#include "secroute/power_allocation.hpp"
#include "secroute/sca.hpp"

namespace secroute {

inline constexpr std::string_view kVersion = "1.0.0";

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string field;
  std::string message;
};

std::string to_string(const Diagnostic& d);
bool has_errors(const std::vector<Diagnostic>& diags) noexcept;

/// Carries every error diagnostic found while loading a configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

enum class RunMode { pipeline, schemes, hops };
enum class SweepVariable { none, zeta, lambda_e, nodes };
enum class PairRule { farthest, first_last, fixed };

std::string_view to_string(RunMode m) noexcept;
std::string_view to_string(SweepVariable v) noexcept;

struct ExperimentConfig {
  SystemParams params = default_system_params();

  std::size_t nodes = 10;
  double node_side = 20.0;
  double eve_side = 400.0;
  Point eve_offset{0.0, 0.0};
  PairRule pair = PairRule::farthest;
  // Endpoints for PairRule::fixed; node region corners when unset.
  std::optional<Point> source_position;
  std::optional<Point> destination_position;
  std::optional<Point> jammer_position;  // node region center when unset

  SolverKind solver = SolverKind::closed_form;
  bool jamming = false;
  bool strict = false;
  double total_power = 1e10;
  double eta = 1e-4;
  bool relative_eta = false;
  std::size_t polyblock_iterations = 10000;
  std::size_t jammer_grid = 100;
  std::size_t sca_starts = 20;
  ScaStartMode sca_start_mode = ScaStartMode::polyblock;
  double rho = 1e-6;
  QuadratureSpec quadrature;

  SweepVariable sweep = SweepVariable::none;
  std::vector<double> sweep_values;

  RunMode mode = RunMode::pipeline;
  std::size_t layouts = 1;
  std::uint64_t trials = 0;  // Monte Carlo trials per row, 0 disables
  std::uint64_t seed = 1;
  bool resample_per_hop = true;
  std::string output;

  Region node_region() const;
  Region eve_region() const;
  Point jammer() const;
  std::pair<Point, Point> endpoints() const;
  JammerConfig jammer_config() const;
  PolyblockOptions polyblock_options() const;
  ScaOptions sca_options() const;

  /// Sweep points; a single NaN when no sweep is configured.
  std::vector<double> sweep_points() const;
  /// Copy with the sweep variable set to `value`.
  ExperimentConfig at(double value) const;

  /// Sorted key = value dump of every setting.
  std::string canonical() const;
  /// FNV-1a of canonical().
  std::uint64_t hash() const;
};

/// Parses INI text ([system], [geometry], [solver], [sweep], [run]).
/// Fields not present keep their defaults. Returns parse diagnostics; the
/// config is usable only when none of them is an error.
std::vector<Diagnostic> parse_config(std::string_view text,
                                     ExperimentConfig& out);

/// Reads and parses a file, then validates it; throws ConfigError when any
/// error diagnostic is produced.
ExperimentConfig load_config(const std::string& path);

/// Range and consistency checks plus warnings on costly settings.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

/// Layout `index` with `nodes` legitimate nodes; deterministic in
/// (config.seed, index).
NetworkInstance make_layout(const ExperimentConfig& config, std::size_t nodes,
                            std::size_t index);

struct RowResult {
  double sweep_value = 0.0;
  std::size_t layout = 0;
  std::size_t nodes = 0;
  std::size_t source = 0, destination = 0;
  std::vector<std::size_t> route;
  std::uint64_t route_hash = 0;
  PowerSolution solution;
  double cop = 0.0;
  double sop = 0.0;
  std::optional<SimReport> mc_cop;
  std::optional<SimReport> mc_sop;
  std::string status = "ok";

  std::size_t hops() const noexcept {
    return route.empty() ? 0 : route.size() - 1;
  }
  bool ok() const noexcept { return status == "ok"; }
};

/// Equal powers (A), closed-form powers (B) and jamming (C) on the route
/// chosen by the link weights; A uses the total power of B.
struct SchemeRow {
  double sweep_value = 0.0;
  std::size_t layout = 0;
  std::size_t hops = 0;
  double total_power_b = 0.0;
  double cop_a = 0.0, sop_a = 0.0;
  double cop_b = 0.0, sop_b = 0.0;
  double cop_c = 0.0, sop_c = 0.0;
  double avg_power_b = 0.0, avg_power_c = 0.0;
  double jammer_power = 0.0;
  std::optional<SimReport> mc_cop_a, mc_cop_b, mc_cop_c;
  bool converged = true;
  std::string status = "ok";

  bool ordered() const noexcept { return cop_c <= cop_b && cop_b <= cop_a; }
};

struct HopHistogram {
  double sweep_value = 0.0;
  std::vector<std::size_t> counts;  // counts[h] = layouts with h hops
  std::size_t total = 0;
  std::size_t failures = 0;
};

struct RunOutput {
  ExperimentConfig config;
  std::vector<RowResult> rows;
  std::vector<SchemeRow> schemes;
  std::vector<HopHistogram> histograms;
  /// False when any solver reported non-convergence.
  bool all_converged = true;
};

/// Solves one layout as configured (route, powers, optional Monte Carlo).
RowResult solve_row(const ExperimentConfig& config, double sweep_value,
                    std::size_t layout, Exec exec = Exec::parallel);

SchemeRow compare_schemes(const ExperimentConfig& config, double sweep_value,
                          std::size_t layout, Exec exec = Exec::parallel);

RunOutput run_experiment(const ExperimentConfig& config,
                         Exec exec = Exec::parallel);

/// Comment block (version, seed, config hash, mode) then header and rows.
void write_csv(std::ostream& out, const RunOutput& run);

struct SweepSummary {
  double value = 0.0;
  std::size_t rows = 0;
  double mean_cop = 0.0;
  double mean_sop = 0.0;
  double mean_avg_power = 0.0;
  double mean_hops = 0.0;
};

/// Per-sweep-point averages over the successful pipeline rows.
std::vector<SweepSummary> summarize(const RunOutput& run);

struct AuditReport {
  std::size_t rows = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> messages;
};

/// Recomputes COP and SOP of each pipeline row of a CSV produced from
/// `config` from its recorded route and powers.
AuditReport audit_csv(const ExperimentConfig& config, std::istream& csv,
                      double rel_tol = 1e-9);

}  // namespace secroute
