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

// On-disk dataset layout:
//
//   dataset/
//     manifest.json
//     chains/<name>.json
//     meshes/catalog.json, meshes/<name>.obj
//     episodes/<id>/meta.json
//     episodes/<id>/frames/%06d.<camera>.rgb.png
//     episodes/<id>/frames/%06d.<camera>.depth.png   (optional, 16-bit mm)
//     episodes/<id>/masks/000000.{object,receptacle}.png   (optional)

#ifndef AUGFORGE_DATASET_HPP_
#define AUGFORGE_DATASET_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "augforge/episode.hpp"
#include "augforge/kinematics.hpp"
#include "augforge/manifest.hpp"

namespace augforge {

std::filesystem::path episode_dir(const std::filesystem::path& root, const std::string& id);
std::filesystem::path chain_path(const std::filesystem::path& root, const std::string& chain_ref);

Episode load_episode(const std::filesystem::path& root, const std::string& id);

// Metadata and annotation coverage without decoding any frame image.
struct EpisodeSummary {
  std::string id;
  std::size_t frame_count = 0;
  std::string task_text;
  std::string object_label;
  std::string receptacle_label;
  // Fraction of frame-0 primary pixels covered; nullopt without a mask.
  std::optional<double> object_coverage;
  std::optional<double> receptacle_coverage;
};
EpisodeSummary summarize_episode(const std::filesystem::path& root, const std::string& id);

// Validates structure first (nothing is written for an invalid episode), then
// writes into episodes/<id>/, replacing any previous contents.
void save_episode(const std::filesystem::path& root, const Episode& episode);

// Empty when every invariant holds. Each entry names the frame, camera, or
// pixel at fault.
std::vector<std::string> validate_episode(const Episode& episode, const KinematicChain& chain);

// Structural checks that do not need the kinematic chain.
std::vector<std::string> validate_episode_structure(const Episode& episode);

// Plain OBJ subset: 'v x y z' and triangular 'f i j k' records. Texture and
// normal references in face records ('f 1/2/3 ...') are ignored; other record
// types are skipped.
MeshAsset parse_obj(const std::string& text, const std::string& name);

// Reads catalog.json ([{file, category, prompt_noun, role_tags}]) and every
// mesh it lists.
MeshCatalog load_mesh_catalog(const std::filesystem::path& catalog_json);

}  // namespace augforge

#endif  // AUGFORGE_DATASET_HPP_
