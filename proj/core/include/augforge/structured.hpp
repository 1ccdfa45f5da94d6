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

// Structure-aware augmentation of a single observation: texture and shape
// edits of the manipulated object and receptacle, distractor insertion and
// background replacement. RGB goes through the generative backend, depth is
// edited geometrically.

#ifndef AUGFORGE_STRUCTURED_HPP_
#define AUGFORGE_STRUCTURED_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "augforge/backend.hpp"
#include "augforge/camera.hpp"
#include "augforge/episode.hpp"
#include "augforge/projection.hpp"
#include "augforge/prompt.hpp"

namespace augforge {

enum class Component {
  kTableBackground,
  kObjectTexture,
  kObjectShape,
  kDistractors,
  kReceptacleTexture,
  kReceptacleShape,
};
inline constexpr Component kAllComponents[] = {
    Component::kTableBackground,   Component::kObjectTexture,
    Component::kObjectShape,       Component::kDistractors,
    Component::kReceptacleTexture, Component::kReceptacleShape,
};
const char* to_string(Component c);
std::optional<Component> component_from_string(const std::string& s);

struct ComponentProbabilities {
  double table_background = 0.5;
  double object_texture = 0.5;
  double object_shape = 0.5;
  double distractors = 0.5;
  double receptacle_texture = 0.5;
  double receptacle_shape = 0.5;

  double of(Component c) const;
  void validate() const;
};

struct StructuredConfig {
  ComponentProbabilities probabilities;
  int max_distractors = 3;
  PromptGrammar grammar;
  std::string background_noun = "tabletop";
  Workspace workspace;
  int dilation_px = 2;
  int distractor_retries = 20;
  // Relative half-width of the replacement size jitter.
  double scale_jitter = 0.15;

  void validate() const;
};

struct AugmentationPlan {
  // Canonical order (kAllComponents), no duplicates.
  std::vector<Component> components;
  std::string object_prompt;
  std::string receptacle_prompt;
  std::string background_prompt;
  const MeshAsset* replacement_object = nullptr;
  const MeshAsset* replacement_receptacle = nullptr;
  int distractor_count = 0;
  std::map<std::string, std::uint64_t> seeds;

  bool has(Component c) const;
  std::uint64_t seed(const std::string& name) const;
};

// Throws InvariantError("empty plan unreachable") if 64 consecutive draws
// select nothing. Shape components are only drawn when the catalog holds an
// asset of that role, distractors only when it holds distractor assets.
AugmentationPlan plan_augmentation(const StructuredConfig& config, const MeshCatalog& catalog,
                                   const Episode& episode, std::uint64_t aug_index,
                                   std::uint64_t global_seed);

// Fills hole pixels with the mean of the nearest valid non-hole depth found
// scanning left, right, up and down. Throws InvariantError if some hole pixel
// sees no valid depth in any direction.
DepthMap backfill_depth(const DepthMap& depth, const Mask& hole);

// Recolours `view` of `frame` inside `mask` with a depth-guided inpaint.
Frame augment_in_category(const Frame& frame, std::size_t view, const Mask& mask,
                          const std::string& prompt, std::uint64_t seed, Backend& backend);

struct CrossCategoryOptions {
  int dilation_px = 2;
  double scale_jitter = 0.15;
  // Pixels the new mesh may not claim (e.g. the other annotated object).
  std::optional<Mask> keep_out;
};

struct CrossCategoryResult {
  Frame frame;
  // Visible rendered footprint of the replacement.
  Mask new_mask;
  RigidTransform pose;
  double scale = 1.0;
  // Pixels handed to the inpainter.
  Mask edit_region;
};

CrossCategoryResult augment_cross_category(const Frame& frame, std::size_t view,
                                           const Mask& old_mask, const MeshAsset& asset,
                                           const std::string& prompt, std::uint64_t seed,
                                           const CameraModel& camera, Backend& backend,
                                           const CrossCategoryOptions& options = {});

struct PlacedDistractor {
  std::string asset;
  RigidTransform pose;
  // Bottom center of the asset on the table.
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  Mask mask;
  DepthMap depth;
  std::string prompt;
};

struct DistractorOptions {
  Workspace workspace;
  PromptGrammar grammar;
  int retries = 20;
  int dilation_px = 2;
};

struct DistractorResult {
  Frame frame;
  std::vector<PlacedDistractor> placed;
  Mask edit_region;
  int attempts = 0;
};

DistractorResult place_distractors(const Frame& frame, std::size_t view,
                                   const std::vector<Mask>& protected_masks,
                                   const std::vector<const MeshAsset*>& assets, int count,
                                   std::uint64_t seed, const CameraModel& camera,
                                   Backend& backend, const DistractorOptions& options);

Frame augment_background(const Frame& frame, std::size_t view,
                         const std::vector<Mask>& protected_masks, const std::string& prompt,
                         std::uint64_t seed, Backend& backend);

struct StructuredResult {
  Episode episode;
  // Union of every region any step was allowed to touch.
  Mask edit_region;
  std::vector<PlacedDistractor> distractors;
  std::vector<std::string> warnings;
  std::vector<std::string> events;
};

// Applies `plan` to frame 0 of the primary camera. All other frames and views
// pass through untouched. The result keeps the source id.
StructuredResult augment_structured(const Episode& episode, const AugmentationPlan& plan,
                                    const StructuredConfig& config, const MeshCatalog& catalog,
                                    Backend& backend);

}  // namespace augforge

#endif  // AUGFORGE_STRUCTURED_HPP_
