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

#include "secroute/rng.hpp"

namespace secroute {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t seed, StreamTag tag,
                         std::uint64_t index) noexcept {
  const auto t = static_cast<std::uint64_t>(tag);
  return splitmix64(splitmix64(splitmix64(seed) ^ t) ^ splitmix64(index + 1));
}

Engine make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return Engine(derive_key(seed, tag, index));
}

}  // namespace secroute
