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

#ifndef AUGFORGE_POLICY_HPP_
#define AUGFORGE_POLICY_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "augforge/projection.hpp"

namespace augforge {

struct PickPlaceLabel {
  GridPixel pick_px;
  GridPixel place_px;
  Vec3 pick_world = Vec3::Zero();
  Vec3 place_world = Vec3::Zero();
};

// Throws InvariantError if either pixel is off the grid or on an empty cell.
PickPlaceLabel label_to_world(GridPixel pick, GridPixel place, const Heightmap& heights,
                              const Workspace& ws);

struct ActionChunk {
  long issued_at = 0;
  // H >= 1 rows of equal width; row i predicts step issued_at + i.
  std::vector<std::vector<double>> actions;

  std::size_t horizon() const { return actions.size(); }
  bool covers(long t) const {
    return t >= issued_at && t < issued_at + static_cast<long>(actions.size());
  }
};

enum class AgeWeighting {
  // weight = exp(-m * age): the latest prediction of step t counts most.
  kNewestHeaviest,
  // weight = exp(-m * (max_age - age)): the earliest prediction counts most.
  kOldestHeaviest,
};

inline constexpr double kDefaultDecay = 0.1;

// Normalized weights of the chunks covering `t`, in input order (0 for chunks
// that do not cover it). Throws InvariantError when none covers `t`.
std::vector<double> aggregation_weights(std::span<const ActionChunk> chunks, long t, double m,
                                        AgeWeighting weighting = AgeWeighting::kNewestHeaviest);

std::vector<double> temporal_aggregate(std::span<const ActionChunk> chunks, long t,
                                       double m = kDefaultDecay,
                                       AgeWeighting weighting = AgeWeighting::kNewestHeaviest);

}  // namespace augforge

#endif  // AUGFORGE_POLICY_HPP_
