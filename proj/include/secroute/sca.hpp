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
#include <span>
#include <vector>

#include "secroute/jamming.hpp"
#include "secroute/polyblock.hpp"
#include "secroute/power_allocation.hpp"

namespace secroute {

/// Point of the slack reformulation
///   min a*b  s.t.  a >= kappa/P_J,  b >= sum psi_n/(kappa c_n),
///                  sum_n g_n(c_n) <= eps/lambda_e,  1 + sum c_n <= P_total/P_J
/// with c_n = P_n / P_J. `kappa` is a fixed positive scale of the slack pair
/// (kappa = 1 is the unscaled form); it leaves a*b unchanged.
struct ScaIterate {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> c;
  double jammer_power = 0.0;
};

struct ScaOptions {
  double rho = 1e-6;              // stop when |U_k - U_{k-1}| < rho * U_{k-1}
  std::size_t max_iterations = 200;
  double inner_tol = 1e-7;        // barrier duality gap, relative
  std::size_t max_newton_steps = 500;
  /// Choose kappa so that a = b at the initial point. With false, kappa = 1.
  bool balance_slacks = true;
  bool record_trace = true;
};

struct ScaTracePoint {
  std::size_t iteration = 0;
  double objective = 0.0;  // sum psi_n / (c_n P_J)
  double sop_slack = 0.0;
  double power_slack = 0.0;
};

struct ScaResult {
  PowerSolution solution;
  ScaIterate final_iterate;
  double kappa = 1.0;
  double kkt_residual = 0.0;
  std::vector<ScaTracePoint> trace;
  bool all_iterates_feasible = true;
};

/// Tangent majorant of -(a - b)^2 at (a_prev, b_prev).
double surrogate_h1(double a, double b, double a_prev, double b_prev) noexcept;

/// Tangent majorant of sum_n g_n(c_n) at c_prev (affine in c).
double surrogate_h2(const FeasibleRegion& region, std::span<const double> c,
                    std::span<const double> c_prev);

/// Tangent majorant of -P_total / P_J at P_J_prev.
double surrogate_h3(double jammer_power, double jammer_power_prev,
                    double total_power) noexcept;

/// sum psi_n / (c_n P_J)
double sca_true_objective(std::span<const double> psi,
                          std::span<const double> c, double jammer_power);

/// Feasibility of an iterate for the reformulated (non-convex) problem.
Feasibility sca_feasibility(const FeasibleRegion& region,
                            const ScaIterate& it, double kappa,
                            double tol = 0.0);

/// Iterate with a and b on their lower bounds.
ScaIterate make_iterate(std::span<const double> psi, std::span<const double> c,
                        double jammer_power, double kappa);

/// One convex subproblem around `prev`, solved by a log-barrier method.
/// Throws std::runtime_error when Newton fails to make progress.
ScaIterate solve_subproblem(const FeasibleRegion& region,
                            const ScaIterate& prev, double kappa,
                            const ScaOptions& options = {});

/// Polyblock solution at `jammer_power` turned into a starting point.
ScaIterate initial_point_from_polyblock(const FeasibleRegion& region,
                                        double jammer_power,
                                        const PolyblockOptions& options = {},
                                        double kappa = 1.0);

/// Random strictly feasible start: log-uniform P_J, random direction scaled
/// to 90% of the boundary.
ScaIterate random_initial_point(const FeasibleRegion& region,
                                std::uint64_t seed, std::uint64_t index,
                                double kappa = 1.0);

/// Scaled KKT residual of the true problem at (c, P_J), in log
/// coordinates; constraints with relative slack above `active_tol` get zero
/// multipliers.
double true_kkt_residual(const FeasibleRegion& region,
                         std::span<const double> c, double jammer_power,
                         double active_tol = 1e-4);

ScaResult sca_solve(const FeasibleRegion& region, const ScaIterate& initial,
                    const ScaOptions& options = {});

enum class ScaStartMode { polyblock, random };

/// Polyblock settings for seeding: a short run is enough for a feasible
/// start.
PolyblockOptions seed_polyblock_options();

struct MultiStartResult {
  ScaResult best;
  std::vector<ScaResult> runs;
};

/// Runs SCA from `starts` initial points; polyblock seeds use log-spaced P_J
/// values (GridSpacing::log); a single start is seeded at P_total / 2.
MultiStartResult sca_multistart(const FeasibleRegion& region,
                                std::size_t starts, ScaStartMode mode,
                                const ScaOptions& options = {},
                                const PolyblockOptions& seed_options =
                                    seed_polyblock_options(),
                                std::uint64_t seed = 0,
                                Exec exec = Exec::parallel);

}  // namespace secroute
