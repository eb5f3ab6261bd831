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

namespace secroute {

/// Execution policy for the data-parallel kernels. `serial` is the
/// reference implementation kept for testing and benchmarking.
enum class Exec { serial, parallel };

/// Number of OpenMP threads the parallel kernels will use (1 without
/// OpenMP).
int max_threads() noexcept;

namespace kernels {

/// Trial/node chunk size. Parallel reductions sum fixed-size chunks and
/// combine the partials in chunk order, so results do not depend on the
/// thread count.
inline constexpr std::size_t kChunk = 2048;

/// sum_i w_i * c / (c + F_i)
double saturation_sum(std::span<const double> w, std::span<const double> f,
                      double c, Exec exec = Exec::parallel);

/// d/dc of saturation_sum: sum_i w_i * F_i / (c + F_i)^2
double saturation_slope(std::span<const double> w, std::span<const double> f,
                        double c, Exec exec = Exec::parallel);

}  // namespace kernels
}  // namespace secroute
