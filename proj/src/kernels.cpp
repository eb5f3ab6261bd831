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

#include "secroute/kernels.hpp"

#include <algorithm>

#if defined(SECROUTE_HAVE_OPENMP)
#include <omp.h>
#endif

namespace secroute {

int max_threads() noexcept {
#if defined(SECROUTE_HAVE_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {

namespace {

struct Saturation {
  double operator()(double c, double f) const { return c / (c + f); }
};

struct Slope {
  double operator()(double c, double f) const {
    const double s = c + f;
    return (f / s) / s;
  }
};

template <class Term>
double chunked_sum(std::span<const double> w, std::span<const double> f,
                   double c, Term term) {
  const std::size_t n = w.size();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  const auto nchunks = static_cast<long>(chunks);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < nchunks; ++k) {
    const std::size_t lo = std::size_t(k) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * term(c, f[i]);
    partial[std::size_t(k)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class Term>
double serial_sum(std::span<const double> w, std::span<const double> f,
                  double c, Term term) {
  const std::size_t n = w.size();
  double total = 0.0;
  for (std::size_t lo = 0; lo < n; lo += kChunk) {
    const std::size_t hi = std::min(n, lo + kChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i] * term(c, f[i]);
    total += s;
  }
  return total;
}

}  // namespace

double saturation_sum(std::span<const double> w, std::span<const double> f,
                      double c, Exec exec) {
  return exec == Exec::serial ? serial_sum(w, f, c, Saturation{})
                              : chunked_sum(w, f, c, Saturation{});
}

double saturation_slope(std::span<const double> w, std::span<const double> f,
                        double c, Exec exec) {
  return exec == Exec::serial ? serial_sum(w, f, c, Slope{})
                              : chunked_sum(w, f, c, Slope{});
}

}  // namespace kernels
}  // namespace secroute
