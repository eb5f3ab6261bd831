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

#include "secroute/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace secroute {

namespace {

using kernels::kChunk;

void check_inputs(const Route& route, std::span<const double> powers,
                  std::uint64_t trials) {
  if (trials == 0) throw ModelError("trials must be >= 1");
  if (powers.size() != route.hop_count())
    throw ModelError("one power per hop required");
  for (double p : powers)
    if (!(p > 0.0)) throw ModelError("transmit powers must be positive");
}

/// Runs `trial(rng)` for every trial; trials are grouped into fixed chunks,
/// each with its own derived stream, so the event count is identical for
/// serial and parallel execution.
template <class Trial>
std::uint64_t count_events(std::uint64_t trials, std::uint64_t seed,
                           StreamTag tag, Exec exec, Trial trial) {
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  auto run_chunk = [&](std::uint64_t k) {
    Engine rng = make_stream(seed, tag, k);
    const std::uint64_t lo = k * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(trials, lo + kChunk);
    std::uint64_t events = 0;
    for (std::uint64_t t = lo; t < hi; ++t) events += trial(rng) ? 1 : 0;
    return events;
  };
  std::uint64_t total = 0;
  if (exec == Exec::serial) {
    for (std::uint64_t k = 0; k < chunks; ++k) total += run_chunk(k);
    return total;
  }
  const auto n = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : total)
  for (long long k = 0; k < n; ++k) total += run_chunk(std::uint64_t(k));
  return total;
}

/// Hop-level constants shared by the SOP simulators.
struct HopGeom {
  Point tx;
  double power;
};

std::vector<HopGeom> hop_geometry(const Route& route,
                                  std::span<const double> powers) {
  std::vector<HopGeom> out;
  for (std::size_t n = 0; n < route.hop_count(); ++n)
    out.push_back({route.hops()[n].tx_pos, powers[n]});
  return out;
}

double dist_pow(Point a, Point b, double alpha) {
  const double d2 = (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
  return std::pow(d2, 0.5 * alpha);
}

}  // namespace

SimReport SimReport::binomial(std::uint64_t events, std::uint64_t trials,
                              std::uint64_t seed) {
  SimReport r;
  r.events = events;
  r.trials = trials;
  r.seed = seed;
  r.estimate = double(events) / double(trials);
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / double(trials));
  r.binomial_counts = true;
  return r;
}

bool SimReport::agrees_with(double value, double k) const noexcept {
  double se = std_error;
  if (binomial_counts && trials > 0 && value > 0.0 && value < 1.0)
    se = std::max(se, std::sqrt(value * (1.0 - value) / double(trials)));
  return std::abs(estimate - value) <= k * se;
}

SimReport simulate_cop(const Route& route, std::span<const double> powers,
                       const SystemParams& params, std::uint64_t trials,
                       std::uint64_t seed, Exec exec) {
  check_inputs(route, powers, trials);
  // Outage on hop n iff |h|^2 < gamma_c d^alpha sigma2 / P_n.
  std::vector<double> thresholds;
  for (std::size_t n = 0; n < route.hop_count(); ++n)
    thresholds.push_back(params.gamma_c * params.sigma2 *
                         std::pow(route.hops()[n].distance, params.alpha) /
                         powers[n]);
  const auto events = count_events(
      trials, seed, StreamTag::fading, exec, [&](Engine& rng) {
        bool outage = false;
        // Draw every hop so the stream layout does not depend on outcomes.
        for (double th : thresholds)
          if (sample_rayleigh_power(rng) < th) outage = true;
        return outage;
      });
  return SimReport::binomial(events, trials, seed);
}

SimReport simulate_sop(const Route& route, std::span<const double> powers,
                       const SystemParams& params, const Region& eve_region,
                       std::uint64_t trials, std::uint64_t seed,
                       SopSimOptions options, Exec exec) {
  check_inputs(route, powers, trials);
  const auto hops = hop_geometry(route, powers);
  const double alpha = params.alpha;
  // SNR_e >= gamma_e  <=>  |h|^2 >= gamma_e sigma2 d^alpha / P.
  auto leaks = [&](const HopGeom& h, const std::vector<Point>& eves,
                   Engine& rng) {
    bool leak = false;
    for (const auto& e : eves) {
      const double need = params.gamma_e * params.sigma2 *
                          dist_pow(h.tx, e, alpha) / h.power;
      if (sample_rayleigh_power(rng) >= need) leak = true;
    }
    return leak;
  };
  const auto events = count_events(
      trials, seed, StreamTag::eavesdroppers, exec, [&](Engine& rng) {
        bool outage = false;
        std::vector<Point> eves;
        if (!options.resample_per_hop)
          eves = sample_ppp(eve_region, params.lambda_e, rng);
        for (const auto& h : hops) {
          if (options.resample_per_hop)
            eves = sample_ppp(eve_region, params.lambda_e, rng);
          if (leaks(h, eves, rng)) outage = true;
        }
        return outage;
      });
  return SimReport::binomial(events, trials, seed);
}

SimReport simulate_sop_jamming(const Route& route,
                               std::span<const double> powers,
                               double jammer_power, Point jammer,
                               const SystemParams& params,
                               const Region& eve_region, std::uint64_t trials,
                               std::uint64_t seed, SopSimOptions options,
                               Exec exec) {
  check_inputs(route, powers, trials);
  if (!(jammer_power > 0.0)) throw ModelError("jammer power must be positive");
  const auto hops = hop_geometry(route, powers);
  const double alpha = params.alpha;
  const double noise = options.include_noise ? params.sigma2 : 0.0;
  auto leaks = [&](const HopGeom& h, const std::vector<Point>& eves,
                   Engine& rng) {
    bool leak = false;
    for (const auto& e : eves) {
      const double signal =
          h.power * sample_rayleigh_power(rng) / dist_pow(h.tx, e, alpha);
      const double dj = dist_pow(jammer, e, alpha);
      const double jam = jammer_power * sample_rayleigh_power(rng) / dj;
      if (signal >= params.gamma_e * (jam + noise)) leak = true;
    }
    return leak;
  };
  const auto events = count_events(
      trials, seed, StreamTag::jamming_fading, exec, [&](Engine& rng) {
        bool outage = false;
        std::vector<Point> eves;
        if (!options.resample_per_hop)
          eves = sample_ppp(eve_region, params.lambda_e, rng);
        for (const auto& h : hops) {
          if (options.resample_per_hop)
            eves = sample_ppp(eve_region, params.lambda_e, rng);
          if (leaks(h, eves, rng)) outage = true;
        }
        return outage;
      });
  return SimReport::binomial(events, trials, seed);
}

SimReport integrate_hop_mc(const HopIntegral& hop, double ratio,
                           std::uint64_t samples, std::uint64_t seed,
                           Exec exec) {
  if (samples < 2) throw ModelError("need at least 2 samples");
  const Region& region = hop.region();
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sum(chunks, 0.0), sum_sq(chunks, 0.0);
  auto run_chunk = [&](std::uint64_t k) {
    Engine rng = make_stream(seed, StreamTag::integration, k);
    std::uniform_real_distribution<double> ux(region.x_min(), region.x_max());
    std::uniform_real_distribution<double> uy(region.y_min(), region.y_max());
    const std::uint64_t lo = k * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(samples, lo + kChunk);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      const double x = ux(rng);
      const double v = hop.integrand({x, uy(rng)}, ratio);
      s += v;
      s2 += v * v;
    }
    sum[k] = s;
    sum_sq[k] = s2;
  };
  if (exec == Exec::serial) {
    for (std::uint64_t k = 0; k < chunks; ++k) run_chunk(k);
  } else {
    const auto n = static_cast<long long>(chunks);
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < n; ++k) run_chunk(std::uint64_t(k));
  }
  double s = 0.0, s2 = 0.0;
  for (std::uint64_t k = 0; k < chunks; ++k) {
    s += sum[k];
    s2 += sum_sq[k];
  }
  const double n = double(samples);
  const double mean = s / n;
  const double var = std::max(0.0, (s2 / n - mean * mean) * n / (n - 1.0));
  SimReport r;
  r.trials = samples;
  r.seed = seed;
  r.estimate = region.area() * mean;
  r.std_error = region.area() * std::sqrt(var / n);
  return r;
}

}  // namespace secroute
