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

#include "secroute/kernels.hpp"
#include "secroute/outage.hpp"
#include "secroute/quadrature.hpp"

namespace secroute {

/// Multi-antenna friendly jammer. Its artificial noise lies in the null
/// space of the legitimate receivers' channels, so it only degrades the
/// eavesdroppers; each eavesdropper sees an Exp(1) effective jamming fade.
struct JammerConfig {
  Point position;
  double total_power = 1e10;  // shared by jammer and all transmitters
  QuadratureSpec quadrature;
  /// Range of power ratios P_T/P_J over which the frozen per-hop rule is
  /// certified to `quadrature.rel_tol`; ratios outside fall back to a
  /// fresh adaptive integration.
  double ratio_min = 1e-9;
  double ratio_max = 1e4;
  std::size_t ratio_probes = 14;
};

/// Leakage integral of one hop as a function of c = P_T / P_J:
///   g(c) = integral over the eavesdropper region of c / (c + F(x)),
///   F(x) = gamma_e * (|x - T| / |x - J|)^alpha.
/// Built once per hop as a frozen composite Gauss-Legendre rule, so g is
/// exactly increasing and concave in c for the discrete sum as well.
class HopIntegral {
 public:
  HopIntegral(Point tx, Point jammer, const Region& eve_region, double gamma_e,
              double alpha, const QuadratureSpec& spec, double ratio_min,
              double ratio_max, std::size_t ratio_probes);

  double value(double ratio, Exec exec = Exec::parallel) const;
  /// dg/dc
  double slope(double ratio, Exec exec = Exec::parallel) const;
  /// Fresh adaptive integration at a single ratio.
  double value_adaptive(double ratio) const;

  double feature(Point x) const noexcept;
  double integrand(Point x, double ratio) const noexcept;

  std::size_t node_count() const noexcept { return weights_.size(); }
  std::size_t panel_count() const noexcept { return panels_; }
  const Region& region() const noexcept { return region_; }
  Point tx() const noexcept { return tx_; }
  double ratio_min() const noexcept { return ratio_min_; }
  double ratio_max() const noexcept { return ratio_max_; }

 private:
  Point tx_, jammer_;
  Region region_;
  double gamma_e_, alpha_;
  QuadratureSpec spec_;
  double ratio_min_, ratio_max_;
  std::size_t panels_ = 0;
  std::vector<double> weights_;
  std::vector<double> features_;
};

struct Feasibility {
  bool feasible = false;
  double sop_slack = 0.0;    // eps/lambda_e - sum_n g_n
  double power_slack = 0.0;  // P_total - P_J - sum_n P_n
};

/// Joint power region of the jamming problem for one route:
///   sum_n g_n(P_n / P_J) <= eps / lambda_e,  P_J + sum_n P_n <= P_total.
class FeasibleRegion {
 public:
  FeasibleRegion(const Route& route, const SystemParams& params,
                 const Region& eve_region, const JammerConfig& jammer);

  std::size_t hop_count() const noexcept { return hops_.size(); }
  std::span<const double> psi() const noexcept { return psi_; }
  double total_power() const noexcept { return jammer_.total_power; }
  double lambda_e() const noexcept { return params_.lambda_e; }
  double sop_budget() const noexcept { return eps_; }
  /// eps / lambda_e
  double integral_budget() const noexcept { return eps_ / params_.lambda_e; }
  const HopIntegral& hop(std::size_t n) const { return hops_.at(n); }
  const JammerConfig& jammer() const noexcept { return jammer_; }
  const SystemParams& params() const noexcept { return params_; }
  const Region& eve_region() const noexcept { return eve_region_; }

  double g(std::size_t n, double tx_power, double jammer_power) const;
  /// sum_n g_n
  double leakage(std::span<const double> powers, double jammer_power) const;
  double sop(std::span<const double> powers, double jammer_power) const;
  Feasibility check(std::span<const double> powers,
                    double jammer_power) const;

 private:
  SystemParams params_;
  Region eve_region_;
  JammerConfig jammer_;
  double eps_;
  std::vector<double> psi_;
  std::vector<HopIntegral> hops_;
};

double g_n(std::size_t hop, double tx_power, double jammer_power,
           const FeasibleRegion& region);

/// 1 - exp(-lambda_e * sum_n g_n). COP is unaffected by the jammer.
double sop_jamming(const FeasibleRegion& region,
                   std::span<const double> powers, double jammer_power);

Feasibility is_feasible(std::span<const double> powers, double jammer_power,
                        const FeasibleRegion& region);

}  // namespace secroute
