// Copyright 2026 The augforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// All randomness in the engine flows from explicit 64-bit seeds derived per
// work item, so results never depend on scheduling.

#ifndef AUGFORGE_SEEDING_HPP_
#define AUGFORGE_SEEDING_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace augforge {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

class Fnv1a64 {
 public:
  Fnv1a64& bytes(std::span<const std::uint8_t> data) {
    for (std::uint8_t b : data) {
      state_ ^= b;
      state_ *= kFnvPrime;
    }
    return *this;
  }
  Fnv1a64& text(std::string_view s) {
    return bytes({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  }
  Fnv1a64& u8(std::uint8_t v) { return bytes({&v, 1}); }
  // Little-endian regardless of host byte order.
  Fnv1a64& u64_le(std::uint64_t v) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>(v >> (8 * i));
    return bytes(buf);
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = kFnvOffsetBasis;
};

inline std::uint64_t fnv1a64(std::string_view s) { return Fnv1a64().text(s).digest(); }

// FNV-1a-64 over: global_seed (8 bytes LE) | episode_id | 0x00 |
// aug_index (8 bytes LE) | frame_index (8 bytes LE) | component_tag.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view episode_id,
                          std::uint64_t aug_index, std::uint64_t frame_index,
                          std::string_view component_tag);

// Independent child seed for a named sub-decision of a seeded operation.
std::uint64_t split_seed(std::uint64_t seed, std::string_view tag);

// Deterministic stream with platform-independent mappings (the standard
// distributions are implementation-defined, the engine is not).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Value mod n; n must be positive.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace augforge

#endif  // AUGFORGE_SEEDING_HPP_
