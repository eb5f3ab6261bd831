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
#include <limits>
#include <span>
#include <vector>

#include "secroute/power_allocation.hpp"

namespace secroute {

/// psi^(2/(2+alpha)): additive per-hop cost whose path sum orders routes by
/// their optimal COP.
double link_weight(double psi, double alpha);

/// Complete (optionally distance-capped) graph over the legitimate nodes
/// with symmetric link weights.
class WeightedGraph {
 public:
  WeightedGraph(std::span<const Point> nodes, const SystemParams& params,
                double max_link_distance =
                    std::numeric_limits<double>::infinity());
  explicit WeightedGraph(const NetworkInstance& instance,
                         const SystemParams& params,
                         double max_link_distance =
                             std::numeric_limits<double>::infinity());

  std::size_t size() const noexcept { return nodes_.size(); }
  /// +inf when the link is absent.
  double weight(std::size_t i, std::size_t j) const {
    return weights_[i * nodes_.size() + j];
  }
  bool has_link(std::size_t i, std::size_t j) const {
    return i != j && weight(i, j) < std::numeric_limits<double>::infinity();
  }
  std::span<const Point> nodes() const noexcept { return nodes_; }
  const SystemParams& params() const noexcept { return params_; }

  /// Sum of weights along `path`, accumulated from the first hop.
  double path_weight(std::span<const std::size_t> path) const;

 private:
  std::vector<Point> nodes_;
  SystemParams params_;
  std::vector<double> weights_;
};

struct PathChoice {
  std::vector<std::size_t> nodes;
  double weight = 0.0;
};

/// Minimum-weight simple path (Dijkstra). Ties are broken by fewer hops,
/// then by the lexicographically smallest node sequence. Throws when the
/// destination is unreachable.
PathChoice optimal_path(const WeightedGraph& graph, std::size_t source,
                        std::size_t destination);

Route find_optimal_route(const WeightedGraph& graph, std::size_t source,
                         std::size_t destination);

/// Every simple path from source to destination with its weight. Guarded
/// against factorial blow-up: throws if the graph has more than
/// `max_nodes` nodes.
std::vector<PathChoice> enumerate_all_routes(const WeightedGraph& graph,
                                             std::size_t source,
                                             std::size_t destination,
                                             std::size_t max_nodes = 8);

struct SecureRoutingResult {
  Route route;
  PowerSolution solution;
  double route_weight = 0.0;
};

/// Link weights -> Dijkstra -> closed-form powers -> minimum COP.
SecureRoutingResult run_secure_routing(const NetworkInstance& instance,
                                       const SystemParams& params);

}  // namespace secroute
