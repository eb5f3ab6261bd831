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
#include <span>
#include <vector>

#include "secroute/geometry.hpp"

namespace secroute {

struct Hop {
  std::size_t tx = 0;
  std::size_t rx = 0;
  Point tx_pos;
  Point rx_pos;
  double distance = 0.0;
  double psi = 0.0;  // gamma_c * d^alpha * sigma2
};

/// Ordered, loop-free multi-hop path with per-hop outage coefficients.
class Route {
 public:
  /// Path through `instance` visiting `nodes` in order.
  static Route through(const NetworkInstance& instance,
                       std::span<const std::size_t> nodes,
                       const SystemParams& params);
  /// Path visiting `path` (indices into `all_nodes`) in order.
  static Route from_path(std::span<const Point> all_nodes,
                         std::span<const std::size_t> path,
                         const SystemParams& params);
  /// Path through explicit positions; node ids are 0..points.size()-1.
  static Route through_points(std::span<const Point> points,
                              const SystemParams& params);

  std::span<const Hop> hops() const noexcept { return hops_; }
  std::span<const std::size_t> nodes() const noexcept { return nodes_; }
  std::size_t hop_count() const noexcept { return hops_.size(); }
  std::vector<double> psi() const;

 private:
  Route(std::vector<std::size_t> nodes, std::vector<Hop> hops)
      : nodes_(std::move(nodes)), hops_(std::move(hops)) {}

  std::vector<std::size_t> nodes_;
  std::vector<Hop> hops_;
};

struct DerivedConstants {
  double omega = 0.0;       // PPP/eavesdropper constant
  double sop_budget = 0.0;  // ln(1/(1-zeta))
};

double omega(const SystemParams& params);
double psi(const SystemParams& params, double hop_distance);
double sop_budget(double zeta);
DerivedConstants derive_constants(const SystemParams& params);

/// 1 - exp(-sum psi_n / P_n).
double cop(std::span<const double> psi, std::span<const double> powers);
double cop(const Route& route, std::span<const double> powers);

/// 1 - exp(-omega * sum P_n^(2/alpha)).
double sop(double omega, double alpha, std::span<const double> powers);

/// Probability form of the exponents above, computed as -expm1(-x).
double outage_from_exponent(double exponent) noexcept;

}  // namespace secroute
