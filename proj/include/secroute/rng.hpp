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
#include <random>

namespace secroute {

/// Engine used for every random draw in the library.
using Engine = std::mt19937_64;

/// Disjoint purposes for derived streams. A stream is identified by
/// (seed, tag, index); distinct tuples give statistically independent
/// engines.
enum class StreamTag : std::uint64_t {
  layout = 0x6c61796f7574ULL,
  eavesdroppers = 0x6576657321ULL,
  fading = 0x666164696e67ULL,
  jamming_fading = 0x6a616d66616465ULL,
  integration = 0x696e74656772ULL,
  initial_points = 0x696e69747074ULL,
  test = 0x74657374ULL,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Key derivation: k = mix(mix(mix(seed) ^ tag) ^ mix(index + 1)), then
/// the engine is seeded with k. The derivation is a pure function of the
/// tuple, so a result depends on (seed, index) and never on which thread
/// consumed the stream.
std::uint64_t derive_key(std::uint64_t seed, StreamTag tag,
                         std::uint64_t index) noexcept;

Engine make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index);

}  // namespace secroute
