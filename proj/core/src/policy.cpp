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

#include "augforge/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "augforge/error.hpp"

namespace augforge {
namespace {

Vec3 cell_to_world(GridPixel px, const Heightmap& heights, const Workspace& ws, const char* what) {
  if (px.x < 0 || px.y < 0 || px.x >= heights.width() || px.y >= heights.height()) {
    throw InvariantError(std::string(what) + " pixel off the top-down grid");
  }
  if (std::isnan(heights.at(px.x, px.y))) {
    throw InvariantError(std::string(what) + " pixel (" + std::to_string(px.x) + ", " +
                         std::to_string(px.y) + ") is on an empty cell");
  }
  return topdown_pixel_to_world(px, heights, ws);
}

}  // namespace

PickPlaceLabel label_to_world(GridPixel pick, GridPixel place, const Heightmap& heights,
                              const Workspace& ws) {
  PickPlaceLabel out;
  out.pick_px = pick;
  out.place_px = place;
  out.pick_world = cell_to_world(pick, heights, ws, "pick");
  out.place_world = cell_to_world(place, heights, ws, "place");
  return out;
}

std::vector<double> aggregation_weights(std::span<const ActionChunk> chunks, long t, double m,
                                        AgeWeighting weighting) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw InvariantError("decay rate must be finite and >= 0");
  long min_age = -1;
  long max_age = -1;
  for (const ActionChunk& c : chunks) {
    if (c.actions.empty()) throw InvariantError("action chunk with horizon 0");
    if (!c.covers(t)) continue;
    const long age = t - c.issued_at;
    min_age = min_age < 0 ? age : std::min(min_age, age);
    max_age = std::max(max_age, age);
  }
  if (min_age < 0) throw InvariantError("no action chunk covers step " + std::to_string(t));

  // Shifted so the heaviest weight is exp(0) = 1 before normalizing.
  std::vector<double> w(chunks.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (!chunks[i].covers(t)) continue;
    const long age = t - chunks[i].issued_at;
    const double k = weighting == AgeWeighting::kNewestHeaviest ? age - min_age : max_age - age;
    w[i] = std::exp(-m * k);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

std::vector<double> temporal_aggregate(std::span<const ActionChunk> chunks, long t, double m,
                                       AgeWeighting weighting) {
  const std::vector<double> w = aggregation_weights(chunks, t, m, weighting);
  std::size_t width = 0;
  bool first = true;
  for (const ActionChunk& c : chunks) {
    if (!c.covers(t)) continue;
    const std::size_t cw = c.actions[t - c.issued_at].size();
    if (first) width = cw;
    if (cw != width) throw DimensionError("covering action vectors differ in width");
    first = false;
  }
  // Offsets from one covering prediction, so that agreeing predictions
  // reproduce that value exactly.
  std::vector<double> ref;
  for (const ActionChunk& c : chunks) {
    if (c.covers(t)) {
      ref = c.actions[t - c.issued_at];
      break;
    }
  }
  std::vector<double> delta(width, 0.0);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto& a = chunks[i].actions[t - chunks[i].issued_at];
    for (std::size_t j = 0; j < width; ++j) delta[j] += w[i] * (a[j] - ref[j]);
  }
  std::vector<double> lo = ref;
  std::vector<double> hi = ref;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto& a = chunks[i].actions[t - chunks[i].issued_at];
    for (std::size_t j = 0; j < width; ++j) {
      lo[j] = std::min(lo[j], a[j]);
      hi[j] = std::max(hi[j], a[j]);
    }
  }
  // Rounding can land an ulp outside the hull of the predictions.
  for (std::size_t j = 0; j < width; ++j) ref[j] = std::clamp(ref[j] + delta[j], lo[j], hi[j]);
  return ref;
}

}  // namespace augforge
