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

#include "augforge/seeding.hpp"

namespace augforge {
namespace {

// MurmurHash3 finalizer; spreads FNV's weak low bits before they are used as
// modular indices.
std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view episode_id,
                          std::uint64_t aug_index, std::uint64_t frame_index,
                          std::string_view component_tag) {
  return Fnv1a64()
      .u64_le(global_seed)
      .text(episode_id)
      .u8(0x00)
      .u64_le(aug_index)
      .u64_le(frame_index)
      .text(component_tag)
      .digest();
}

std::uint64_t split_seed(std::uint64_t seed, std::string_view tag) {
  return fmix64(Fnv1a64().u64_le(seed).text(tag).digest());
}

}  // namespace augforge
