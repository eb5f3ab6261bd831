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

#include "secroute/outage.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

namespace secroute {

namespace {

void check_powers(std::span<const double> powers) {
  for (double p : powers)
    if (!(p > 0.0) || !std::isfinite(p))
      throw ModelError("transmit powers must be finite and positive");
}

}  // namespace

Route Route::from_path(std::span<const Point> all_nodes,
                       std::span<const std::size_t> path,
                       const SystemParams& params) {
  if (path.size() < 2) throw ModelError("route needs at least one hop");
  std::unordered_set<std::size_t> seen;
  std::vector<Hop> hops;
  hops.reserve(path.size() - 1);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= all_nodes.size())
      throw ModelError("route node index out of range");
    if (!seen.insert(path[i]).second)
      throw ModelError("route revisits a node");
    if (i == 0) continue;
    Hop h;
    h.tx = path[i - 1];
    h.rx = path[i];
    h.tx_pos = all_nodes[h.tx];
    h.rx_pos = all_nodes[h.rx];
    h.distance = distance(h.tx_pos, h.rx_pos);
    if (!(h.distance > 0.0)) throw ModelError("zero-length hop");
    h.psi = secroute::psi(params, h.distance);
    hops.push_back(h);
  }
  return Route({path.begin(), path.end()}, std::move(hops));
}

Route Route::through(const NetworkInstance& instance,
                     std::span<const std::size_t> nodes,
                     const SystemParams& params) {
  if (nodes.size() < 2) throw ModelError("route needs at least one hop");
  if (nodes.front() != instance.source() ||
      nodes.back() != instance.destination())
    throw ModelError("route must run from source to destination");
  return from_path(instance.nodes(), nodes, params);
}

Route Route::through_points(std::span<const Point> points,
                            const SystemParams& params) {
  std::vector<std::size_t> ids(points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return from_path(points, ids, params);
}

std::vector<double> Route::psi() const {
  std::vector<double> out;
  out.reserve(hops_.size());
  for (const auto& h : hops_) out.push_back(h.psi);
  return out;
}

double omega(const SystemParams& params) {
  const double a = params.alpha;
  return 2.0 * std::numbers::pi * params.lambda_e / a * std::tgamma(2.0 / a) *
         std::pow(params.gamma_e * params.sigma2, -2.0 / a);
}

double psi(const SystemParams& params, double hop_distance) {
  if (!(hop_distance > 0.0)) throw ModelError("hop distance must be positive");
  return params.gamma_c * std::pow(hop_distance, params.alpha) * params.sigma2;
}

double sop_budget(double zeta) {
  if (!(zeta > 0.0 && zeta < 1.0)) throw ModelError("zeta outside (0,1)");
  return -std::log1p(-zeta);
}

DerivedConstants derive_constants(const SystemParams& params) {
  params.validate();
  return {omega(params), sop_budget(params.zeta)};
}

double outage_from_exponent(double exponent) noexcept {
  return -std::expm1(-exponent);
}

double cop(std::span<const double> psi, std::span<const double> powers) {
  if (psi.size() != powers.size())
    throw ModelError("one power per hop required");
  check_powers(powers);
  double s = 0.0;
  for (std::size_t n = 0; n < psi.size(); ++n) s += psi[n] / powers[n];
  return outage_from_exponent(s);
}

double cop(const Route& route, std::span<const double> powers) {
  const auto p = route.psi();
  return cop(p, powers);
}

double sop(double omega, double alpha, std::span<const double> powers) {
  check_powers(powers);
  double s = 0.0;
  for (double p : powers) s += std::pow(p, 2.0 / alpha);
  return outage_from_exponent(omega * s);
}

}  // namespace secroute
