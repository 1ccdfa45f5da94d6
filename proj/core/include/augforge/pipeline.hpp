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

// Dataset-level runs. Work is split into independent (episode, aug_index)
// items whose randomness is derived from the item identity alone, so the
// output bytes do not depend on the worker count or on scheduling.

#ifndef AUGFORGE_PIPELINE_HPP_
#define AUGFORGE_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "augforge/backend.hpp"
#include "augforge/baseline.hpp"
#include "augforge/config.hpp"
#include "augforge/manifest.hpp"
#include "augforge/structured.hpp"

namespace augforge {

struct BackendSet {
  std::shared_ptr<Backend> inpaint;
  std::shared_ptr<Backend> segment;
  std::shared_ptr<Backend> track;
};

BackendSet make_backends(const PipelineConfig& config);

struct RunSummary {
  DatasetManifest manifest;
  std::size_t items = 0;
  std::size_t failures = 0;
  bool budget_exceeded = false;
};

std::string augmented_id(const std::string& source_id, std::uint64_t aug_index);

// Backends default to make_backends(config).
RunSummary run_structured(const PipelineConfig& config, const std::filesystem::path& input,
                          const std::filesystem::path& output, const BackendSet* backends = nullptr);
RunSummary run_video(const PipelineConfig& config, const std::filesystem::path& input,
                     const std::filesystem::path& output, const BackendSet* backends = nullptr);

struct BaselineRun {
  BaselineMode mode = BaselineMode::kCopyPaste;
  std::filesystem::path patches;
  std::uint64_t seed = 0;
  int workers = 1;
  double failure_budget = 0.1;
  BaselineOptions options;
};

RunSummary run_baseline(const BaselineRun& run, const std::filesystem::path& input,
                        const std::filesystem::path& output);

MeshCatalog load_catalog_for(const PipelineConfig& config, const std::filesystem::path& input);

// Rebuilds the plan a structured record describes. Throws FormatError when
// the record names unknown components or meshes.
AugmentationPlan plan_from_record(const AugmentationRecord& record, const MeshCatalog& catalog);

// Regenerates one structured item from its record; geometric settings
// (workspace, dilation, retries, jitter) come from `config`.
Episode reproduce_structured(const PipelineConfig& config, const std::filesystem::path& input,
                             const AugmentationRecord& record, const BackendSet& backends);

struct ValidationReport {
  std::size_t episodes = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

ValidationReport validate_dataset(const std::filesystem::path& root);

struct DatasetStats {
  std::string dataset_id;
  std::size_t episodes = 0;
  std::size_t frames = 0;
  std::size_t records = 0;
  std::size_t failures = 0;
  std::size_t object_masks = 0;
  std::size_t receptacle_masks = 0;
  double mean_object_coverage = 0.0;
  double mean_receptacle_coverage = 0.0;
  // Object and receptacle labels with their episode counts.
  std::map<std::string, std::size_t> labels;
  // Share of records whose plan includes each component.
  std::map<std::string, double> component_frequency;
  // "<output id>: <warning>" for every record warning.
  std::vector<std::string> warnings;
};

DatasetStats compute_stats(const std::filesystem::path& root);
std::string stats_to_json(const DatasetStats& stats);
std::string format_stats(const DatasetStats& stats);

}  // namespace augforge

#endif  // AUGFORGE_PIPELINE_HPP_
