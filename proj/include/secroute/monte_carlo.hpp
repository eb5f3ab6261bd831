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

#include <cstdint>
#include <span>

#include "secroute/jamming.hpp"
#include "secroute/kernels.hpp"
#include "secroute/outage.hpp"

namespace secroute {

/// Binomial (or sample-mean) estimate with its standard error.
struct SimReport {
  double estimate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t events = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  bool binomial_counts = false;

  static SimReport binomial(std::uint64_t events, std::uint64_t trials,
                            std::uint64_t seed);
  /// |estimate - value| <= k * se. For binomial counts se is the larger of
  /// std_error and the binomial standard error at `value`, otherwise it is
  /// std_error.
  bool agrees_with(double value, double k = 3.0) const noexcept;
};

struct SopSimOptions {
  /// Draw a fresh eavesdropper field for each hop (the independence
  /// assumption behind the closed form) instead of one field per trial.
  bool resample_per_hop = true;
  /// Add sigma2 to the jamming denominator at the eavesdroppers.
  bool include_noise = false;
};

/// Connection outage: any hop with P_n |h|^2 / (d^alpha sigma2) < gamma_c.
SimReport simulate_cop(const Route& route, std::span<const double> powers,
                       const SystemParams& params, std::uint64_t trials,
                       std::uint64_t seed, Exec exec = Exec::parallel);

/// Secrecy outage: any eavesdropper of the PPP in `eve_region` with
/// SNR >= gamma_e at any hop.
SimReport simulate_sop(const Route& route, std::span<const double> powers,
                       const SystemParams& params, const Region& eve_region,
                       std::uint64_t trials, std::uint64_t seed,
                       SopSimOptions options = {}, Exec exec = Exec::parallel);

/// Secrecy outage with a null-space jammer: SIR test with independent
/// Exp(1) signal and effective jamming fades per eavesdropper and hop.
SimReport simulate_sop_jamming(const Route& route,
                               std::span<const double> powers,
                               double jammer_power, Point jammer,
                               const SystemParams& params,
                               const Region& eve_region, std::uint64_t trials,
                               std::uint64_t seed, SopSimOptions options = {},
                               Exec exec = Exec::parallel);

/// Plain Monte Carlo estimate of one hop's leakage integral at ratio c,
/// from `samples` uniform points over the hop's region.
SimReport integrate_hop_mc(const HopIntegral& hop, double ratio,
                           std::uint64_t samples, std::uint64_t seed,
                           Exec exec = Exec::parallel);

}  // namespace secroute
