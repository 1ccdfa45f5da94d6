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
#include <numeric>

#include <gtest/gtest.h>

#include "augforge/error.hpp"
#include "augforge/seeding.hpp"
#include "synthetic.hpp"

namespace augforge {
namespace {

ActionChunk chunk(long at, std::vector<std::vector<double>> rows) { return {at, std::move(rows)}; }

TEST(LabelToWorld, GridOriginOverFlatTable) {
  const Workspace ws{-0.3, 0.3, -0.15, 0.3, 0.02, 0.005};
  Heightmap h(ws.grid_width(), ws.grid_height());
  h.set(0, 0, 0.0f);
  h.set(5, 7, 0.03f);
  const PickPlaceLabel l = label_to_world({0, 0}, {5, 7}, h, ws);
  EXPECT_DOUBLE_EQ(l.pick_world.x(), -0.3 + 0.0025);
  EXPECT_DOUBLE_EQ(l.pick_world.y(), -0.15 + 0.0025);
  EXPECT_DOUBLE_EQ(l.pick_world.z(), 0.02);
  EXPECT_NEAR(l.place_world.z(), 0.05, 1e-7);
  EXPECT_EQ(l.place_px.x, 5);
}

TEST(LabelToWorld, SentinelAndOffGridCellsRejected) {
  const Workspace ws{0, 0.1, 0, 0.1, 0, 0.01};
  Heightmap h(10, 10);
  h.set(1, 1, 0.0f);
  EXPECT_THROW(label_to_world({1, 1}, {2, 2}, h, ws), InvariantError);
  EXPECT_THROW(label_to_world({10, 1}, {1, 1}, h, ws), InvariantError);
}

TEST(LabelToWorld, RoundTripThroughSyntheticScene) {
  const Episode e = synth::make_tabletop_episode("ep", 21, 160, 120, 1);
  const Workspace ws = synth::tabletop_workspace();
  const CameraModel& cam = e.cameras[0].model;
  const TopdownView view =
      project_topdown(e.frames[0].views[0].rgb, *e.frames[0].views[0].depth, cam, ws);
  const double diag = std::sqrt(2.0) * ws.topdown_resolution;
  int checked = 0;
  SeededRng rng(2);
  while (checked < 50) {
    const GridPixel px{static_cast<int>(rng.index(ws.grid_width())),
                       static_cast<int>(rng.index(ws.grid_height()))};
    if (!Heightmap::is_valid(view.heights.at(px.x, px.y))) continue;
    const PickPlaceLabel l = label_to_world(px, px, view.heights, ws);
    // The world point re-enters the grid within one cell diagonal of its cell center.
    const double cx = ws.x_min + (px.x + 0.5) * ws.topdown_resolution;
    const double cy = ws.y_min + (px.y + 0.5) * ws.topdown_resolution;
    EXPECT_LE(std::hypot(l.pick_world.x() - cx, l.pick_world.y() - cy), diag);
    // Heights come from a real back-projected surface: table or an object.
    EXPECT_GE(l.pick_world.z(), ws.table_height - 1e-3);
    EXPECT_LE(l.pick_world.z(), ws.table_height + 0.13);
    ++checked;
  }
}

TEST(TemporalAggregate, HandDerivedOneThird) {
  const std::vector<ActionChunk> chunks{chunk(4, {{0.0}}), chunk(3, {{9.0}, {1.0}})};
  // Ages 0 and 1 at t = 4; weights 1 and 1/2.
  const auto out = temporal_aggregate(chunks, 4, std::log(2.0));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0], 1.0 / 3.0, 1e-12);
}

TEST(TemporalAggregate, SingleChunkUnchanged) {
  const std::vector<ActionChunk> chunks{chunk(0, {{1.5, -2.0}, {0.25, 7.0}})};
  EXPECT_EQ(temporal_aggregate(chunks, 1), (std::vector<double>{0.25, 7.0}));
}

TEST(TemporalAggregate, EqualPredictionsReproducedExactly) {
  SeededRng rng(6);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(-10, 10);
    std::vector<ActionChunk> chunks;
    for (long k = 0; k < 5; ++k) chunks.push_back(chunk(k, std::vector<std::vector<double>>(6, {a})));
    EXPECT_EQ(temporal_aggregate(chunks, 4, rng.uniform(0, 3))[0], a);
  }
}

TEST(TemporalAggregate, NoCoveringChunkThrows) {
  const std::vector<ActionChunk> chunks{chunk(0, {{1.0}, {2.0}})};
  EXPECT_THROW(temporal_aggregate(chunks, 2), InvariantError);
  EXPECT_THROW(temporal_aggregate(std::span<const ActionChunk>(), 0), InvariantError);
}

TEST(TemporalAggregate, MismatchedWidthsThrow) {
  const std::vector<ActionChunk> chunks{chunk(0, {{1.0}}), chunk(0, {{1.0, 2.0}})};
  EXPECT_THROW(temporal_aggregate(chunks, 0), DimensionError);
}

TEST(TemporalAggregate, ZeroDecayIsPlainMean) {
  const std::vector<ActionChunk> chunks{chunk(0, {{0}, {0}, {3.0}}), chunk(1, {{0}, {6.0}}),
                                        chunk(2, {{9.0}})};
  EXPECT_NEAR(temporal_aggregate(chunks, 2, 0.0)[0], 6.0, 1e-12);
}

TEST(TemporalAggregate, LargeDecayPicksNewestOrOldest) {
  const std::vector<ActionChunk> chunks{chunk(0, {{0}, {0}, {3.0}}), chunk(1, {{0}, {6.0}}),
                                        chunk(2, {{9.0}})};
  EXPECT_NEAR(temporal_aggregate(chunks, 2, 50.0, AgeWeighting::kNewestHeaviest)[0], 9.0, 1e-9);
  EXPECT_NEAR(temporal_aggregate(chunks, 2, 50.0, AgeWeighting::kOldestHeaviest)[0], 3.0, 1e-9);
}

TEST(TemporalAggregate, ConvexAndNormalizedOnRandomSets) {
  SeededRng rng(44);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.index(6));
    const int width = 1 + static_cast<int>(rng.index(4));
    const long t = 10;
    std::vector<ActionChunk> chunks;
    for (int c = 0; c < n; ++c) {
      const long at = t - static_cast<long>(rng.index(6));
      const int h = static_cast<int>(t - at) + 1 + static_cast<int>(rng.index(3));
      std::vector<std::vector<double>> rows(h, std::vector<double>(width));
      for (auto& r : rows) {
        for (double& v : r) v = rng.uniform(-5, 5);
      }
      chunks.push_back({at, rows});
    }
    const double m = rng.uniform(0, 4);
    const auto weighting = rng.uniform() < 0.5 ? AgeWeighting::kNewestHeaviest : AgeWeighting::kOldestHeaviest;
    const auto w = aggregation_weights(chunks, t, m, weighting);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    const auto out = temporal_aggregate(chunks, t, m, weighting);
    for (int k = 0; k < width; ++k) {
      double lo = 1e300;
      double hi = -1e300;
      for (const auto& c : chunks) {
        lo = std::min(lo, c.actions[t - c.issued_at][k]);
        hi = std::max(hi, c.actions[t - c.issued_at][k]);
      }
      EXPECT_GE(out[k], lo);
      EXPECT_LE(out[k], hi);
    }
  }
}

TEST(AggregationWeights, NonCoveringChunksGetZero) {
  const std::vector<ActionChunk> chunks{chunk(0, {{1.0}}), chunk(5, {{1.0}, {2.0}})};
  const auto w = aggregation_weights(chunks, 6, 0.1);
  EXPECT_EQ(w[0], 0.0);
  EXPECT_EQ(w[1], 1.0);
}

}  // namespace
}  // namespace augforge
