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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "secroute/rng.hpp"

namespace secroute {

/// Thrown when a model object is constructed with values outside its
/// domain (non-positive densities, degenerate regions, ...).
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 2-D position in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned rectangle in meters.
class Region {
 public:
  Region(double x_min, double x_max, double y_min, double y_max);

  /// Square of side `side` centered on `center`.
  static Region centered_square(Point center, double side);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double y_min() const noexcept { return y_min_; }
  double y_max() const noexcept { return y_max_; }
  double width() const noexcept { return x_max_ - x_min_; }
  double height() const noexcept { return y_max_ - y_min_; }
  double area() const noexcept { return width() * height(); }
  Point center() const noexcept {
    return {0.5 * (x_min_ + x_max_), 0.5 * (y_min_ + y_max_)};
  }
  bool contains(Point p) const noexcept {
    return p.x >= x_min_ && p.x <= x_max_ && p.y >= y_min_ && p.y <= y_max_;
  }

 private:
  double x_min_, x_max_, y_min_, y_max_;
};

/// Physical-layer and secrecy parameters, all in linear units.
struct SystemParams {
  double alpha = 4.0;      // path-loss exponent
  double sigma2 = 1.0;     // noise power
  double gamma_c = 1.0;    // legitimate SNR threshold
  double gamma_e = 1.0;    // eavesdropper SNR/SIR threshold
  double lambda_e = 1e-4;  // eavesdropper density per m^2
  double zeta = 0.5;       // maximum tolerable SOP

  /// Empty when valid, otherwise one message per offending field.
  std::vector<std::string> problems() const;
  /// Throws ModelError listing every problem.
  void validate() const;
};

/// Defaults used by the experiments: gamma_c = 0.8 dB, gamma_e = 0 dB,
/// alpha = 4, lambda_e = 1e-4, sigma2 = 1.
SystemParams default_system_params();

/// Legitimate node layout with a designated source/destination pair.
class NetworkInstance {
 public:
  NetworkInstance(std::vector<Point> nodes, std::size_t source,
                  std::size_t destination, Region node_region,
                  Region eve_region);

  std::span<const Point> nodes() const noexcept { return nodes_; }
  const Point& node(std::size_t i) const { return nodes_.at(i); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t source() const noexcept { return source_; }
  std::size_t destination() const noexcept { return destination_; }
  const Region& node_region() const noexcept { return node_region_; }
  const Region& eve_region() const noexcept { return eve_region_; }

  /// Same layout with a different endpoint pair.
  NetworkInstance with_endpoints(std::size_t source,
                                 std::size_t destination) const;

 private:
  std::vector<Point> nodes_;
  std::size_t source_, destination_;
  Region node_region_;
  Region eve_region_;
};

double db_to_linear(double x_db) noexcept;
double linear_to_db(double x) noexcept;

double distance(Point a, Point b) noexcept;

/// Homogeneous PPP of density `lambda_e` restricted to `region`.
std::vector<Point> sample_ppp(const Region& region, double lambda_e,
                              Engine& rng);

/// |h|^2 for h ~ CN(0,1): unit-mean exponential.
double sample_rayleigh_power(Engine& rng);

/// `count` points uniform i.i.d. over `region`.
std::vector<Point> sample_uniform_points(const Region& region,
                                         std::size_t count, Engine& rng);

/// Indices (i, j), i < j, of the pair with the largest separation.
std::pair<std::size_t, std::size_t> farthest_pair(std::span<const Point> pts);

}  // namespace secroute
