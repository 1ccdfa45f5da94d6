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

#ifndef AUGFORGE_CONFIG_HPP_
#define AUGFORGE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "augforge/backend.hpp"
#include "augforge/structured.hpp"
#include "augforge/video.hpp"

namespace augforge {

struct PipelineConfig {
  std::uint64_t global_seed = 0;
  int num_augmentations = 100;
  int workers = 1;

  ComponentProbabilities probabilities;
  int max_distractors = 3;
  PromptGrammar grammar;
  std::string background_noun = "tabletop";
  Workspace workspace;
  // Relative paths resolve against the input dataset root. Empty means
  // meshes/catalog.json if present.
  std::filesystem::path mesh_catalog;
  int dilation_px = 2;
  int distractor_retries = 20;
  double scale_jitter = 0.15;

  double video_object_probability = 0.5;
  double video_background_probability = 0.5;
  int reseed_after = 3;
  double robot_inflation = kDefaultRobotInflation;
  bool include_originals = false;

  BackendDescriptor inpaint_backend;
  BackendDescriptor segment_backend;
  BackendDescriptor track_backend;

  // Fraction of failed items above which a run is reported as failed.
  double failure_budget = 0.1;

  void validate() const;
  StructuredConfig structured() const;
  VideoConfig video() const;
};

// Every field is optional; unknown keys raise FormatError. Values are
// checked by validate(), which every run calls.
PipelineConfig parse_config_json(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& config);

// Points all three backends at one HTTP endpoint.
void use_http_backends(PipelineConfig& config, const std::string& endpoint);
void use_mock_backends(PipelineConfig& config);

}  // namespace augforge

#endif  // AUGFORGE_CONFIG_HPP_
