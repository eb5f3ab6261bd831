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

#include "secroute/jamming.hpp"

#include <cmath>

namespace secroute {

namespace {

constexpr double kFeatureCap = 1e300;

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n <= 1) return {lo};
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(std::exp(a + (b - a) * double(i) / double(n - 1)));
  return out;
}

}  // namespace

HopIntegral::HopIntegral(Point tx, Point jammer, const Region& eve_region,
                         double gamma_e, double alpha,
                         const QuadratureSpec& spec, double ratio_min,
                         double ratio_max, std::size_t ratio_probes)
    : tx_(tx),
      jammer_(jammer),
      region_(eve_region),
      gamma_e_(gamma_e),
      alpha_(alpha),
      spec_(spec),
      ratio_min_(ratio_min),
      ratio_max_(ratio_max) {
  if (!(ratio_min > 0.0 && ratio_max > ratio_min))
    throw ModelError("invalid ratio range for hop integral");
  const auto ratios = log_spaced(ratio_min, ratio_max, ratio_probes);
  std::vector<double> f;
  auto eval = [&](std::span<const Point> pts, std::span<double> out) {
    f.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) f[i] = feature(pts[i]);
    for (std::size_t k = 0; k < ratios.size(); ++k)
      for (std::size_t i = 0; i < pts.size(); ++i)
        out[k * pts.size() + i] = ratios[k] / (ratios[k] + f[i]);
  };
  auto res = integrate_adaptive(region_, ratios.size(), eval, spec_);
  panels_ = res.rule.panel_count;
  weights_ = std::move(res.rule.weights);
  features_.reserve(weights_.size());
  for (const auto& p : res.rule.points) features_.push_back(feature(p));
}

double HopIntegral::feature(Point x) const noexcept {
  const double dt2 = (x.x - tx_.x) * (x.x - tx_.x) + (x.y - tx_.y) * (x.y - tx_.y);
  const double dj2 =
      (x.x - jammer_.x) * (x.x - jammer_.x) + (x.y - jammer_.y) * (x.y - jammer_.y);
  if (dj2 == 0.0) return kFeatureCap;
  const double f = gamma_e_ * std::pow(dt2 / dj2, 0.5 * alpha_);
  return std::min(f, kFeatureCap);
}

double HopIntegral::integrand(Point x, double ratio) const noexcept {
  return ratio / (ratio + feature(x));
}

double HopIntegral::value(double ratio, Exec exec) const {
  if (!(ratio >= 0.0)) throw ModelError("power ratio must be non-negative");
  if (ratio == 0.0) return 0.0;
  if (ratio < ratio_min_ || ratio > ratio_max_) return value_adaptive(ratio);
  return kernels::saturation_sum(weights_, features_, ratio, exec);
}

double HopIntegral::slope(double ratio, Exec exec) const {
  if (!(ratio >= 0.0)) throw ModelError("power ratio must be non-negative");
  return kernels::saturation_slope(weights_, features_, ratio, exec);
}

double HopIntegral::value_adaptive(double ratio) const {
  if (ratio == 0.0) return 0.0;
  auto eval = [&](std::span<const Point> pts, std::span<double> out) {
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = integrand(pts[i], ratio);
  };
  return integrate_adaptive(region_, 1, eval, spec_).integrals[0];
}

FeasibleRegion::FeasibleRegion(const Route& route, const SystemParams& params,
                               const Region& eve_region,
                               const JammerConfig& jammer)
    : params_(params),
      eve_region_(eve_region),
      jammer_(jammer),
      eps_(secroute::sop_budget(params.zeta)),
      psi_(route.psi()) {
  params_.validate();
  if (!(jammer.total_power > 0.0))
    throw ModelError("jammer total power budget must be positive");
  if (!std::isfinite(jammer.position.x) || !std::isfinite(jammer.position.y))
    throw ModelError("jammer position must be finite");
  hops_.reserve(route.hop_count());
  for (const auto& h : route.hops())
    hops_.emplace_back(h.tx_pos, jammer.position, eve_region, params.gamma_e,
                       params.alpha, jammer.quadrature, jammer.ratio_min,
                       jammer.ratio_max, jammer.ratio_probes);
}

double FeasibleRegion::g(std::size_t n, double tx_power,
                         double jammer_power) const {
  if (!(tx_power >= 0.0) || !(jammer_power > 0.0))
    throw ModelError("g_n needs P_T >= 0 and P_J > 0");
  return hops_.at(n).value(tx_power / jammer_power);
}

double FeasibleRegion::leakage(std::span<const double> powers,
                               double jammer_power) const {
  if (powers.size() != hops_.size())
    throw ModelError("one power per hop required");
  double s = 0.0;
  for (std::size_t n = 0; n < powers.size(); ++n)
    s += g(n, powers[n], jammer_power);
  return s;
}

double FeasibleRegion::sop(std::span<const double> powers,
                           double jammer_power) const {
  return outage_from_exponent(params_.lambda_e * leakage(powers, jammer_power));
}

Feasibility FeasibleRegion::check(std::span<const double> powers,
                                  double jammer_power) const {
  Feasibility f;
  f.sop_slack = integral_budget() - leakage(powers, jammer_power);
  double used = jammer_power;
  for (double p : powers) used += p;
  f.power_slack = jammer_.total_power - used;
  f.feasible = f.sop_slack >= 0.0 && f.power_slack >= 0.0;
  return f;
}

double g_n(std::size_t hop, double tx_power, double jammer_power,
           const FeasibleRegion& region) {
  return region.g(hop, tx_power, jammer_power);
}

double sop_jamming(const FeasibleRegion& region,
                   std::span<const double> powers, double jammer_power) {
  return region.sop(powers, jammer_power);
}

Feasibility is_feasible(std::span<const double> powers, double jammer_power,
                        const FeasibleRegion& region) {
  return region.check(powers, jammer_power);
}

}  // namespace secroute
