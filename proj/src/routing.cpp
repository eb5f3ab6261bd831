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

#include "secroute/routing.hpp"

#include <algorithm>
#include <cmath>

namespace secroute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Label {
  double dist = kInf;
  std::size_t hops = 0;
  std::vector<std::size_t> path;
};

bool better(const Label& a, const Label& b) {
  if (a.dist != b.dist) return a.dist < b.dist;
  if (a.hops != b.hops) return a.hops < b.hops;
  return std::lexicographical_compare(a.path.begin(), a.path.end(),
                                      b.path.begin(), b.path.end());
}

}  // namespace

double link_weight(double psi, double alpha) {
  if (!(psi > 0.0)) throw ModelError("psi must be positive");
  return std::pow(psi, 2.0 / (2.0 + alpha));
}

WeightedGraph::WeightedGraph(std::span<const Point> nodes,
                             const SystemParams& params,
                             double max_link_distance)
    : nodes_(nodes.begin(), nodes.end()), params_(params) {
  const std::size_t m = nodes_.size();
  if (m < 2) throw ModelError("graph needs at least 2 nodes");
  weights_.assign(m * m, kInf);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = distance(nodes_[i], nodes_[j]);
      if (!(d > 0.0)) throw ModelError("coincident legitimate nodes");
      if (d > max_link_distance) continue;
      const double w = link_weight(psi(params_, d), params_.alpha);
      weights_[i * m + j] = w;
      weights_[j * m + i] = w;
    }
}

WeightedGraph::WeightedGraph(const NetworkInstance& instance,
                             const SystemParams& params,
                             double max_link_distance)
    : WeightedGraph(instance.nodes(), params, max_link_distance) {}

double WeightedGraph::path_weight(std::span<const std::size_t> path) const {
  double s = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) s += weight(path[i - 1], path[i]);
  return s;
}

PathChoice optimal_path(const WeightedGraph& graph, std::size_t source,
                        std::size_t destination) {
  const std::size_t m = graph.size();
  if (source >= m || destination >= m)
    throw ModelError("endpoint index out of range");
  if (source == destination)
    throw ModelError("source and destination must differ");

  // Dense O(M^2) Dijkstra over lexicographic labels.
  std::vector<Label> label(m);
  std::vector<char> done(m, 0);
  label[source] = {0.0, 0, {source}};
  for (std::size_t iter = 0; iter < m; ++iter) {
    std::size_t u = m;
    for (std::size_t v = 0; v < m; ++v)
      if (!done[v] && label[v].dist < kInf &&
          (u == m || better(label[v], label[u])))
        u = v;
    if (u == m) break;
    done[u] = 1;
    if (u == destination) break;
    for (std::size_t v = 0; v < m; ++v) {
      if (done[v] || !graph.has_link(u, v)) continue;
      Label cand{label[u].dist + graph.weight(u, v), label[u].hops + 1,
                 label[u].path};
      cand.path.push_back(v);
      if (better(cand, label[v])) label[v] = std::move(cand);
    }
  }
  if (!done[destination]) throw ModelError("destination unreachable");
  return {label[destination].path, label[destination].dist};
}

Route find_optimal_route(const WeightedGraph& graph, std::size_t source,
                         std::size_t destination) {
  const auto choice = optimal_path(graph, source, destination);
  return Route::from_path(graph.nodes(), choice.nodes, graph.params());
}

std::vector<PathChoice> enumerate_all_routes(const WeightedGraph& graph,
                                             std::size_t source,
                                             std::size_t destination,
                                             std::size_t max_nodes) {
  const std::size_t m = graph.size();
  if (m > max_nodes)
    throw ModelError("route enumeration refused: graph exceeds max_nodes");
  if (source >= m || destination >= m || source == destination)
    throw ModelError("invalid endpoints");

  std::vector<PathChoice> out;
  std::vector<std::size_t> path{source};
  std::vector<char> on_path(m, 0);
  on_path[source] = 1;

  auto dfs = [&](auto&& self, std::size_t u) -> void {
    if (u == destination) {
      out.push_back({path, graph.path_weight(path)});
      return;
    }
    for (std::size_t v = 0; v < m; ++v) {
      if (on_path[v] || !graph.has_link(u, v)) continue;
      on_path[v] = 1;
      path.push_back(v);
      self(self, v);
      path.pop_back();
      on_path[v] = 0;
    }
  };
  dfs(dfs, source);
  return out;
}

SecureRoutingResult run_secure_routing(const NetworkInstance& instance,
                                       const SystemParams& params) {
  const auto constants = derive_constants(params);
  const WeightedGraph graph(instance, params);
  const auto choice =
      optimal_path(graph, instance.source(), instance.destination());
  auto route = Route::through(instance, choice.nodes, params);
  auto solution = allocate_powers(route, constants, params.alpha);
  solution.achieved_cop = min_cop_for_route(route, constants, params.alpha);
  return {std::move(route), std::move(solution), choice.weight};
}

}  // namespace secroute
