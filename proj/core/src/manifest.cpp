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

#include "augforge/manifest.hpp"

#include "augforge/error.hpp"
#include "json_util.hpp"

namespace augforge {

using detail::Json;

namespace {

Json record_json(const AugmentationRecord& r) {
  Json distractors = Json::array();
  for (const DistractorRecord& d : r.distractors) {
    distractors.push_back({{"asset", d.asset},
                           {"position", d.position},
                           {"yaw", d.yaw},
                           {"prompt", d.prompt}});
  }
  return {{"source_id", r.source_id},
          {"output_id", r.output_id},
          {"aug_index", r.aug_index},
          {"global_seed", r.global_seed},
          {"regime", r.regime},
          {"components", r.components},
          {"prompts", r.prompts},
          {"meshes", r.meshes},
          {"distractors", distractors},
          {"distractor_count", r.distractor_count},
          {"seeds", r.seeds},
          {"warnings", r.warnings},
          {"events", r.events},
          {"task_text", r.task_text},
          {"backend", {{"name", r.backend_name}, {"version", r.backend_version}}},
          {"engine_version", r.engine_version}};
}

AugmentationRecord record_from(const Json& j) {
  const std::string what = "augmentation record";
  AugmentationRecord r;
  r.source_id = detail::get_as<std::string>(j, "source_id", what);
  r.output_id = detail::get_as<std::string>(j, "output_id", what);
  r.aug_index = detail::get_as<std::uint64_t>(j, "aug_index", what);
  r.global_seed = detail::get_as<std::uint64_t>(j, "global_seed", what);
  r.regime = detail::get_as<std::string>(j, "regime", what);
  r.components = detail::get_or<std::vector<std::string>>(j, "components", {});
  r.prompts = detail::get_or<std::map<std::string, std::string>>(j, "prompts", {});
  r.meshes = detail::get_or<std::map<std::string, std::string>>(j, "meshes", {});
  if (auto it = j.find("distractors"); it != j.end()) {
    for (const Json& d : *it) {
      DistractorRecord rec;
      rec.asset = detail::get_as<std::string>(d, "asset", what);
      rec.position = detail::get_as<std::array<double, 3>>(d, "position", what);
      rec.yaw = detail::get_as<double>(d, "yaw", what);
      rec.prompt = detail::get_as<std::string>(d, "prompt", what);
      r.distractors.push_back(rec);
    }
  }
  r.distractor_count = detail::get_or<int>(j, "distractor_count", 0);
  r.seeds = detail::get_or<std::map<std::string, std::uint64_t>>(j, "seeds", {});
  r.warnings = detail::get_or<std::vector<std::string>>(j, "warnings", {});
  r.events = detail::get_or<std::vector<std::string>>(j, "events", {});
  r.task_text = detail::get_or<std::string>(j, "task_text", "");
  if (auto it = j.find("backend"); it != j.end()) {
    r.backend_name = detail::get_or<std::string>(*it, "name", "");
    r.backend_version = detail::get_or<std::string>(*it, "version", "");
  }
  r.engine_version = detail::get_or<std::string>(j, "engine_version", "");
  return r;
}

}  // namespace

std::string record_to_json(const AugmentationRecord& record) {
  return detail::dump_json(record_json(record));
}

AugmentationRecord parse_record_json(const std::string& text) {
  return record_from(detail::parse_json(text, "augmentation record"));
}

std::string manifest_to_json(const DatasetManifest& m) {
  Json episodes = Json::array();
  for (const ManifestEntry& e : m.episodes) {
    episodes.push_back({{"id", e.id}, {"frames", e.frame_count}});
  }
  Json records = Json::array();
  for (const AugmentationRecord& r : m.records) records.push_back(record_json(r));
  Json failures = Json::array();
  for (const FailureRecord& f : m.failures) {
    failures.push_back({{"source_id", f.source_id}, {"aug_index", f.aug_index}, {"error", f.error}});
  }
  return detail::dump_json({{"schema_version", m.schema_version},
                            {"dataset_id", m.dataset_id},
                            {"episodes", episodes},
                            {"records", records},
                            {"failures", failures}});
}

DatasetManifest parse_manifest_json(const std::string& text) {
  const Json j = detail::parse_json(text, "manifest");
  const std::string what = "manifest";
  DatasetManifest m;
  m.schema_version = detail::get_as<int>(j, "schema_version", what);
  if (m.schema_version != kSchemaVersion) {
    throw FormatError("manifest: unknown schema version " + std::to_string(m.schema_version));
  }
  m.dataset_id = detail::get_or<std::string>(j, "dataset_id", "");
  for (const Json& e : detail::require(j, "episodes", what)) {
    m.episodes.push_back({detail::get_as<std::string>(e, "id", what),
                          detail::get_as<std::size_t>(e, "frames", what)});
  }
  if (auto it = j.find("records"); it != j.end()) {
    for (const Json& r : *it) m.records.push_back(record_from(r));
  }
  if (auto it = j.find("failures"); it != j.end()) {
    for (const Json& f : *it) {
      m.failures.push_back({detail::get_as<std::string>(f, "source_id", what),
                            detail::get_as<std::uint64_t>(f, "aug_index", what),
                            detail::get_as<std::string>(f, "error", what)});
    }
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& root) {
  const auto path = root / "manifest.json";
  if (!std::filesystem::exists(path)) throw IoError("missing file " + path.string());
  try {
    return parse_manifest_json(detail::read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_manifest(const std::filesystem::path& root, const DatasetManifest& manifest) {
  std::filesystem::create_directories(root);
  detail::write_text_file(root / "manifest.json", manifest_to_json(manifest));
}

}  // namespace augforge
