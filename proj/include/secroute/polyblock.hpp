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

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "secroute/jamming.hpp"
#include "secroute/power_allocation.hpp"

namespace secroute {

/// Upper bound attached to each vertex z. `vertex` is U(z). `relaxed`
/// maximizes U over the box [0, z] cut by the power budget and by the chord
/// relaxation sum_n g_n(z_n) p_n / z_n <= eps/lambda_e, which every feasible
/// point of the box satisfies because each g_n is concave with g_n(0) = 0.
enum class VertexBound { vertex, relaxed };

struct PolyblockOptions {
  VertexBound bound = VertexBound::relaxed;
  /// With the relaxed bound, also project the relaxed maximizer onto the
  /// boundary; it serves as incumbent candidate and, when it lies on the
  /// boundary below the vertex, as the cut point.
  bool relaxed_cuts = true;
  /// With the relaxed bound, raise the lower corner of each box to the
  /// smallest powers that could still beat the incumbent and use the chord
  /// over [lower, z].
  bool reduce_boxes = true;
  double eta = 1e-4;          // stop when U(best vertex) - U(incumbent) <= eta
  bool relative_eta = false;  // compare the gap against eta * |U(incumbent)|
  double vertex_floor = -1.0; // <= 0 selects 1e-6 * P_total
  double root_tol = 1e-9;     // relative tolerance of boundary projections
  std::size_t max_iterations = 10000;
  bool dominance_filter = false;
  bool record_trace = true;
  /// Stop once the upper bound drops to `cutoff` (a value known to be
  /// attainable elsewhere); the result is then flagged `pruned`.
  double cutoff = -std::numeric_limits<double>::infinity();
};

struct BoundSample {
  std::size_t iteration = 0;
  double upper = 0.0;
  double lower = 0.0;
  double gap() const noexcept { return upper - lower; }
};

struct PolyblockResult {
  PowerSolution solution;
  double jammer_power = 0.0;
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  std::size_t vertex_count = 0;
  bool pruned = false;
  std::vector<BoundSample> trace;
};

/// U(p) = -sum psi_n / P_n; increasing in every coordinate and
/// COP = 1 - exp(U).
double objective(std::span<const double> psi, std::span<const double> powers);

/// Solves increasing, concave phi(x) = 0 on [lo, hi] with phi(lo) <= 0 <
/// phi(hi) by Newton steps from the feasible side, falling back to
/// bisection. Returns a point with phi <= 0 within `rel_tol` of the root.
template <class Phi, class Slope>
double solve_concave_root(Phi&& phi, Slope&& slope, double lo, double hi,
                          double rel_tol, int max_steps = 200);

/// Vertex of a box [0, z] containing the whole power region at fixed P_J:
/// each coordinate takes its own SOP cap and the leftover budget.
std::vector<double> initial_vertex(const FeasibleRegion& region,
                                   double jammer_power, double rel_tol = 1e-9);

struct RelaxedBound {
  double value = 0.0;          // >= max of U over the relaxed set, <= U(z)
  std::vector<double> point;   // maximizer of the Lagrangian at the final multipliers
};

/// Dual bound for max -sum psi_n/p_n s.t. lower < p <= z, sum_n chord_n p_n
/// <= leak_budget, sum_n p_n <= power_budget. An empty `lower` means 0. An
/// empty box gives -inf.
RelaxedBound relaxed_upper_bound(std::span<const double> psi,
                           std::span<const double> z,
                           std::span<const double> chord, double leak_budget,
                           double power_budget,
                           std::span<const double> lower = {});

struct Projection {
  double delta = 0.0;
  std::vector<double> point;
};

/// Largest delta in [0, 1] with delta * vertex in the power region.
Projection project_to_boundary(std::span<const double> vertex,
                               const FeasibleRegion& region,
                               double jammer_power, double rel_tol = 1e-9);

/// Vertices adjacent to `vertex` after cutting at boundary point `cut`:
/// the n-th one is `vertex` with coordinate n replaced by cut[n].
std::vector<std::vector<double>> generate_vertices(
    std::span<const double> vertex, std::span<const double> cut);

/// Outer polyblock approximation for the transmit powers at fixed P_J.
PolyblockResult polyblock_solve(const FeasibleRegion& region,
                                double jammer_power,
                                const PolyblockOptions& options = {});

struct JammerSearchResult {
  PolyblockResult best;
  std::size_t best_index = 0;
  std::vector<PolyblockResult> per_point;
};

struct JammerSearchOptions {
  /// Iterations of the first pass that only collects incumbents; 0 disables
  /// the pass and runs every grid point to convergence.
  std::size_t probe_iterations = 20;
};

/// Runs polyblock_solve at every P_J in `grid` (independently, in
/// parallel) and keeps the feasible result with the largest U. A short
/// probe pass first fixes a common cutoff so that grid points which cannot
/// beat it stop early; the outcome does not depend on scheduling.
JammerSearchResult solve_with_jammer_search(
    const FeasibleRegion& region, std::span<const double> grid,
    const PolyblockOptions& options = {},
    const JammerSearchOptions& search = {}, Exec exec = Exec::parallel);

enum class GridSpacing { linear, log };

/// `count` P_J values. linear: P_total * i / (count + 1), i = 1..count.
/// log: log-spaced over [1e-3, 0.99] * P_total.
std::vector<double> jammer_grid(double total_power, std::size_t count = 100,
                                GridSpacing spacing = GridSpacing::linear);

// ---------------------------------------------------------------------------

template <class Phi, class Slope>
double solve_concave_root(Phi&& phi, Slope&& slope, double lo, double hi,
                          double rel_tol, int max_steps) {
  double x = lo;
  double fx = phi(x);
  if (fx > 0.0) return lo;
  for (int step = 0; step < max_steps; ++step) {
    if (hi - x <= rel_tol * hi) break;
    double cand = -1.0;
    const double d = slope(x);
    if (d > 0.0 && std::isfinite(d)) cand = x - fx / d;
    if (!(cand > x && cand < hi)) cand = 0.5 * (x + hi);
    const double fc = phi(cand);
    if (fc <= 0.0) {
      const double moved = cand - x;
      x = cand;
      fx = fc;
      if (moved <= rel_tol * x) break;
    } else {
      hi = cand;
    }
  }
  return x;
}

}  // namespace secroute
