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

#ifndef AUGFORGE_MANIFEST_HPP_
#define AUGFORGE_MANIFEST_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace augforge {

inline constexpr int kSchemaVersion = 1;

struct DistractorRecord {
  std::string asset;
  std::array<double, 3> position{};
  double yaw = 0.0;
  std::string prompt;

  bool operator==(const DistractorRecord&) const = default;
};

// Provenance for one generated episode: enough to regenerate it byte-exactly
// against the same backend.
struct AugmentationRecord {
  std::string source_id;
  std::string output_id;
  std::uint64_t aug_index = 0;
  std::uint64_t global_seed = 0;
  // "structured", "video" or "baseline:<mode>".
  std::string regime;
  std::vector<std::string> components;
  std::map<std::string, std::string> prompts;
  std::map<std::string, std::string> meshes;
  std::vector<DistractorRecord> distractors;
  // Requested, which may exceed distractors.size().
  int distractor_count = 0;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> warnings;
  // Tracking fallbacks and re-seeds, each tagged with its frame index.
  std::vector<std::string> events;
  std::string task_text;
  std::string backend_name;
  std::string backend_version;
  std::string engine_version;

  bool operator==(const AugmentationRecord&) const = default;
};

struct FailureRecord {
  std::string source_id;
  std::uint64_t aug_index = 0;
  std::string error;

  bool operator==(const FailureRecord&) const = default;
};

struct ManifestEntry {
  std::string id;
  std::size_t frame_count = 0;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::string dataset_id;
  int schema_version = kSchemaVersion;
  std::vector<ManifestEntry> episodes;
  std::vector<AugmentationRecord> records;
  std::vector<FailureRecord> failures;

  bool operator==(const DatasetManifest&) const = default;
};

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest parse_manifest_json(const std::string& text);
std::string record_to_json(const AugmentationRecord& record);
AugmentationRecord parse_record_json(const std::string& text);

DatasetManifest load_manifest(const std::filesystem::path& dataset_root);
void save_manifest(const std::filesystem::path& dataset_root, const DatasetManifest& manifest);

}  // namespace augforge

#endif  // AUGFORGE_MANIFEST_HPP_
