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

// Whole-trajectory augmentation without annotations. The manipulated object
// is found by segmenting under the end effector (from forward kinematics),
// then tracked; the background is whatever the segmenter finds that touches
// neither robot nor object.

#ifndef AUGFORGE_VIDEO_HPP_
#define AUGFORGE_VIDEO_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augforge/backend.hpp"
#include "augforge/camera.hpp"
#include "augforge/episode.hpp"
#include "augforge/kinematics.hpp"
#include "augforge/prompt.hpp"

namespace augforge {

inline constexpr double kDefaultRobotInflation = 1.1;

// nullopt when the end effector is at or behind the camera plane. The pixel
// may still fall outside the image.
std::optional<Projection> end_effector_pixel(const KinematicChain& chain,
                                             std::span<const double> joints,
                                             const CameraModel& camera);

// Union of the chain's link primitives posed by FK. Capsule radii and box
// half-extents are scaled by `inflation`. Throws InvariantError if the chain
// has joints but no link geometry at all.
Mask robot_mask(const KinematicChain& chain, std::span<const double> joints,
                const CameraModel& camera, int width, int height,
                double inflation = kDefaultRobotInflation);

// Highest-scoring segment containing `seed_pixel`, minus `robot`. Empty when
// the segmenter finds nothing there.
Mask seed_object_mask(const Image& image, PixelCoord seed_pixel, Backend& segmenter,
                      const Mask& robot);

struct ReseedContext {
  const KinematicChain* chain = nullptr;
  CameraModel camera;
  Backend* segmenter = nullptr;
  double inflation = kDefaultRobotInflation;
  // Consecutive tracker fallbacks that trigger a re-seed.
  int after = 3;
};

struct TrackOutcome {
  std::vector<Mask> masks;
  // "frame <t>: ..." lines for fallbacks and re-seeds.
  std::vector<std::string> events;
};

TrackOutcome track_object(const Episode& episode, std::size_t view, const Mask& initial,
                          Backend& tracker, const std::optional<ReseedContext>& reseed = {});

std::vector<Mask> background_candidates(const Image& image, const Mask& robot,
                                        const Mask& object, Backend& segmenter);

// Pixel-wise union. Throws on an empty list or mismatched sizes.
Mask aggregate_masks(std::span<const Mask> masks);

struct VideoConfig {
  double object_probability = 0.5;
  double background_probability = 0.5;
  PromptGrammar grammar;
  std::string background_noun = "tabletop";
  int reseed_after = 3;
  double robot_inflation = kDefaultRobotInflation;

  void validate() const;
};

struct VideoPlan {
  bool object = false;
  bool background = false;
  std::string object_prompt;
  std::string background_prompt;
  std::uint64_t object_seed = 0;
  std::uint64_t global_seed = 0;
  std::uint64_t aug_index = 0;
  std::string episode_id;

  // Fresh per frame and per camera.
  std::uint64_t background_seed(std::size_t frame, const std::string& camera) const;
};

VideoPlan plan_video(const VideoConfig& config, const Episode& episode, std::uint64_t aug_index,
                     std::uint64_t global_seed);

struct TrajectoryMasks {
  std::string camera;
  std::vector<Mask> object;
  std::vector<Mask> robot;
  std::vector<std::vector<Mask>> candidates;
};

struct VideoBackends {
  Backend* inpaint = nullptr;
  Backend* segment = nullptr;
  Backend* track = nullptr;
};

struct VideoResult {
  Episode episode;
  std::vector<TrajectoryMasks> masks;
  std::vector<std::string> events;
  std::vector<std::string> warnings;
};

// Every camera view is processed independently. RGB only; depth, joints and
// actions pass through.
VideoResult augment_trajectory(const Episode& episode, const VideoPlan& plan,
                               const KinematicChain& chain, const VideoBackends& backends,
                               const VideoConfig& config);

}  // namespace augforge

#endif  // AUGFORGE_VIDEO_HPP_
