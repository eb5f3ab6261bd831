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

#include "secroute/geometry.hpp"

#include <cmath>
#include <sstream>

namespace secroute {

Region::Region(double x_min, double x_max, double y_min, double y_max)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max) &&
        std::isfinite(y_min) && std::isfinite(y_max)))
    throw ModelError("region bounds must be finite");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw ModelError("region must have positive width and height");
}

Region Region::centered_square(Point center, double side) {
  const double h = 0.5 * side;
  return Region(center.x - h, center.x + h, center.y - h, center.y + h);
}

std::vector<std::string> SystemParams::problems() const {
  std::vector<std::string> out;
  if (!(std::isfinite(alpha) && alpha >= 2.0))
    out.emplace_back("alpha must be >= 2");
  if (!(std::isfinite(sigma2) && sigma2 > 0.0))
    out.emplace_back("sigma2 must be positive");
  if (!(std::isfinite(gamma_c) && gamma_c > 0.0))
    out.emplace_back("gamma_c must be positive");
  if (!(std::isfinite(gamma_e) && gamma_e > 0.0))
    out.emplace_back("gamma_e must be positive");
  if (!(std::isfinite(lambda_e) && lambda_e >= 0.0))
    out.emplace_back("lambda_e must be non-negative");
  if (!(zeta > 0.0 && zeta < 1.0)) out.emplace_back("zeta outside (0,1)");
  return out;
}

void SystemParams::validate() const {
  const auto p = problems();
  if (p.empty()) return;
  std::ostringstream os;
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "; " : "") << p[i];
  throw ModelError(os.str());
}

SystemParams default_system_params() {
  SystemParams p;
  p.alpha = 4.0;
  p.sigma2 = 1.0;
  p.gamma_c = db_to_linear(0.8);
  p.gamma_e = db_to_linear(0.0);
  p.lambda_e = 1e-4;
  p.zeta = 0.5;
  return p;
}

NetworkInstance::NetworkInstance(std::vector<Point> nodes, std::size_t source,
                                 std::size_t destination, Region node_region,
                                 Region eve_region)
    : nodes_(std::move(nodes)),
      source_(source),
      destination_(destination),
      node_region_(node_region),
      eve_region_(eve_region) {
  if (nodes_.size() < 2) throw ModelError("network needs at least 2 nodes");
  if (source_ >= nodes_.size() || destination_ >= nodes_.size())
    throw ModelError("source/destination index out of range");
  if (source_ == destination_)
    throw ModelError("source and destination must differ");
  for (const auto& p : nodes_)
    if (!node_region_.contains(p))
      throw ModelError("node lies outside the node region");
}

NetworkInstance NetworkInstance::with_endpoints(std::size_t source,
                                                std::size_t destination) const {
  return NetworkInstance(nodes_, source, destination, node_region_,
                         eve_region_);
}

double db_to_linear(double x_db) noexcept { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) noexcept { return 10.0 * std::log10(x); }

double distance(Point a, Point b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<Point> sample_ppp(const Region& region, double lambda_e,
                              Engine& rng) {
  if (!(lambda_e >= 0.0)) throw ModelError("PPP density must be >= 0");
  if (lambda_e == 0.0) return {};
  std::poisson_distribution<long> count(lambda_e * region.area());
  const auto n = static_cast<std::size_t>(count(rng));
  return sample_uniform_points(region, n, rng);
}

double sample_rayleigh_power(Engine& rng) {
  return std::exponential_distribution<double>(1.0)(rng);
}

std::vector<Point> sample_uniform_points(const Region& region,
                                         std::size_t count, Engine& rng) {
  std::uniform_real_distribution<double> ux(region.x_min(), region.x_max());
  std::uniform_real_distribution<double> uy(region.y_min(), region.y_max());
  std::vector<Point> pts(count);
  for (auto& p : pts) {
    p.x = ux(rng);
    p.y = uy(rng);
  }
  return pts;
}

std::pair<std::size_t, std::size_t> farthest_pair(
    std::span<const Point> pts) {
  if (pts.size() < 2) throw ModelError("farthest_pair needs two points");
  std::pair<std::size_t, std::size_t> best{0, 1};
  double best_d = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = distance(pts[i], pts[j]);
      if (d > best_d) {
        best_d = d;
        best = {i, j};
      }
    }
  return best;
}

}  // namespace secroute
