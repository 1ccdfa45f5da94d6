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

#include "augforge/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "augforge/dataset.hpp"
#include "augforge/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace augforge {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("augforge_pipeline_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

PipelineConfig tabletop_config(int augmentations) {
  PipelineConfig c;
  c.workspace = synth::tabletop_workspace();
  c.num_augmentations = augmentations;
  c.global_seed = 17;
  return c;
}

// Fails inpainting whenever the request seed is divisible by `period`.
class FlakyBackend final : public Backend {
 public:
  explicit FlakyBackend(std::uint64_t period) : period_(period) {}
  BackendInfo info() override { return mock_.info(); }
  Image inpaint_raw(const InpaintRequest& req) override {
    if (req.seed % period_ == 0) throw BackendError("flaky: refused");
    return mock_.inpaint_raw(req);
  }
  std::vector<ScoredMask> segment_raw(const SegmentRequest& req) override { return mock_.segment_raw(req); }
  TrackResult track_raw(const TrackRequest& req) override { return mock_.track_raw(req); }

 private:
  std::uint64_t period_;
  MockBackend mock_;
};

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(parse_config_json(R"({"num_augmentation": 4})"), FormatError);
  EXPECT_THROW(parse_config_json(R"({"workspace": {"x_min": 0, "zz": 1}})"), FormatError);
  EXPECT_THROW(parse_config_json("[1, 2]"), FormatError);
}

TEST(Config, JsonRoundTrip) {
  PipelineConfig c = tabletop_config(7);
  c.workers = 3;
  c.probabilities.distractors = 0.25;
  c.grammar.colors = {"teal"};
  use_http_backends(c, "http://127.0.0.1:9");
  const PipelineConfig back = parse_config_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(back.inpaint_backend.kind, BackendKind::kHttp);
  EXPECT_EQ(back.track_backend.endpoint, "http://127.0.0.1:9");
}

TEST(Config, ValidateCatchesBadValues) {
  PipelineConfig c;
  c.num_augmentations = 0;
  EXPECT_THROW(c.validate(), InvariantError);
  c = PipelineConfig{};
  c.workers = 0;
  EXPECT_THROW(c.validate(), InvariantError);
  c = PipelineConfig{};
  c.probabilities.table_background = 1.5;
  EXPECT_THROW(c.validate(), InvariantError);
  c = PipelineConfig{};
  c.failure_budget = -0.1;
  EXPECT_THROW(c.validate(), InvariantError);
}

TEST(RunStructured, CountsIdsAndPayloads) {
  TempDir dir("structured");
  synth::write_tabletop_dataset(dir.path() / "in", 3, 96, 72, 2, 5);
  const RunSummary s = run_structured(tabletop_config(4), dir.path() / "in", dir.path() / "out");
  EXPECT_EQ(s.items, 12u);
  EXPECT_EQ(s.failures, 0u);
  EXPECT_FALSE(s.budget_exceeded);
  ASSERT_EQ(s.manifest.episodes.size(), 12u);
  EXPECT_EQ(s.manifest.records.size(), 12u);
  std::set<std::string> ids;
  for (const ManifestEntry& e : s.manifest.episodes) ids.insert(e.id);
  EXPECT_EQ(ids.size(), 12u);
  EXPECT_TRUE(ids.count(augmented_id("ep000", 3)));

  EXPECT_EQ(load_manifest(dir.path() / "out"), s.manifest);
  EXPECT_TRUE(validate_dataset(dir.path() / "out").ok());
  for (const AugmentationRecord& r : s.manifest.records) {
    const Episode src = load_episode(dir.path() / "in", r.source_id);
    const Episode out = load_episode(dir.path() / "out", r.output_id);
    ASSERT_EQ(out.frames.size(), src.frames.size());
    for (std::size_t f = 0; f < src.frames.size(); ++f) {
      EXPECT_EQ(out.frames[f].joints, src.frames[f].joints);
      EXPECT_EQ(out.frames[f].action, src.frames[f].action);
      EXPECT_EQ(out.frames[f].gripper, src.frames[f].gripper);
    }
    EXPECT_EQ(r.regime, "structured");
    EXPECT_EQ(r.backend_name, "mock");
  }
}

TEST(RunStructured, WorkerCountDoesNotChangeBytes) {
  TempDir dir("workers");
  synth::write_tabletop_dataset(dir.path() / "in", 3, 96, 72, 2, 8);
  PipelineConfig c = tabletop_config(5);
  c.workers = 1;
  run_structured(c, dir.path() / "in", dir.path() / "one");
  c.workers = 8;
  run_structured(c, dir.path() / "in", dir.path() / "eight");
  EXPECT_EQ(oracle::tree_hash(dir.path() / "one"), oracle::tree_hash(dir.path() / "eight"));
  c.global_seed += 1;
  run_structured(c, dir.path() / "in", dir.path() / "other");
  EXPECT_NE(oracle::tree_hash(dir.path() / "one"), oracle::tree_hash(dir.path() / "other"));
}

TEST(RunStructured, RecordReproducesEpisode) {
  TempDir dir("reproduce");
  synth::write_tabletop_dataset(dir.path() / "in", 2, 96, 72, 1, 9);
  const PipelineConfig c = tabletop_config(6);
  const RunSummary s = run_structured(c, dir.path() / "in", dir.path() / "out");
  const BackendSet backends = make_backends(c);
  for (const AugmentationRecord& stored : load_manifest(dir.path() / "out").records) {
    // Compared after the same storage quantization the run applied.
    save_episode(dir.path() / "again", reproduce_structured(c, dir.path() / "in", stored, backends));
    const Episode again = load_episode(dir.path() / "again", stored.output_id);
    const Episode saved = load_episode(dir.path() / "out", stored.output_id);
    EXPECT_TRUE(again == saved) << stored.output_id;
  }
  EXPECT_EQ(s.manifest.records.size(), 12u);
}

TEST(RunStructured, RecordWithUnknownMeshRejected) {
  AugmentationRecord r;
  r.components = {"object_shape"};
  r.meshes["object"] = "no_such_mesh";
  EXPECT_THROW(plan_from_record(r, synth::make_catalog()), FormatError);
  r.components = {"sparkles"};
  EXPECT_THROW(plan_from_record(r, synth::make_catalog()), FormatError);
}

TEST(RunStructured, FailuresAreIsolatedAndCounted) {
  TempDir dir("flaky");
  synth::write_tabletop_dataset(dir.path() / "in", 2, 96, 72, 1, 12);
  PipelineConfig c = tabletop_config(10);
  c.probabilities = {1, 1, 0, 0, 1, 0};  // texture only, so every item inpaints
  c.workers = 4;
  auto flaky = std::make_shared<FlakyBackend>(4);
  const BackendSet set{flaky, flaky, flaky};
  const RunSummary s = run_structured(c, dir.path() / "in", dir.path() / "out", &set);
  EXPECT_EQ(s.items, 20u);
  EXPECT_GT(s.failures, 0u);
  EXPECT_LT(s.failures, 20u);
  EXPECT_EQ(s.manifest.failures.size(), s.failures);
  EXPECT_EQ(s.manifest.episodes.size() + s.failures, 20u);
  for (const FailureRecord& f : s.manifest.failures) {
    EXPECT_NE(f.error.find("flaky"), std::string::npos);
    EXPECT_FALSE(fs::exists(episode_dir(dir.path() / "out", augmented_id(f.source_id, f.aug_index))));
  }
  EXPECT_TRUE(validate_dataset(dir.path() / "out").ok());
  EXPECT_EQ(s.budget_exceeded, s.failures > 2);

  auto broken = std::make_shared<FlakyBackend>(1);
  const BackendSet all_fail{broken, broken, broken};
  const RunSummary bad = run_structured(c, dir.path() / "in", dir.path() / "out2", &all_fail);
  EXPECT_EQ(bad.failures, 20u);
  EXPECT_TRUE(bad.budget_exceeded);
}

TEST(RunStructured, OutputMustDifferFromInput) {
  TempDir dir("same");
  synth::write_tabletop_dataset(dir.path(), 1, 64, 48, 1, 1);
  EXPECT_THROW(run_structured(tabletop_config(1), dir.path(), dir.path()), InvariantError);
}

void write_video_dataset(const fs::path& root, int trajectories, int frames) {
  std::vector<Episode> eps;
  for (int i = 0; i < trajectories; ++i) {
    synth::VideoSpec spec;
    spec.frames = frames;
    spec.start_y = -0.05 + 0.05 * i;
    eps.push_back(synth::make_video_scene("traj" + std::to_string(i), spec).episode);
  }
  synth::write_dataset(root, "gantry", eps, {synth::slider_chain()});
}

TEST(RunVideo, CountsWithAndWithoutOriginals) {
  TempDir dir("video");
  write_video_dataset(dir.path() / "in", 2, 5);
  PipelineConfig c;
  c.num_augmentations = 3;
  const RunSummary s = run_video(c, dir.path() / "in", dir.path() / "out");
  EXPECT_EQ(s.manifest.episodes.size(), 6u);
  EXPECT_EQ(s.failures, 0u);
  for (const AugmentationRecord& r : s.manifest.records) {
    EXPECT_EQ(r.regime, "video");
    EXPECT_FALSE(r.components.empty());
  }
  EXPECT_TRUE(validate_dataset(dir.path() / "out").ok());

  c.include_originals = true;
  const RunSummary with = run_video(c, dir.path() / "in", dir.path() / "out2");
  EXPECT_EQ(with.manifest.episodes.size(), 8u);
  EXPECT_EQ(with.manifest.records.size(), 6u);
  EXPECT_EQ(load_episode(dir.path() / "out2", "traj1"), load_episode(dir.path() / "in", "traj1"));
}

TEST(RunVideo, MissingChainIsAnItemFailure) {
  TempDir dir("video_nochain");
  write_video_dataset(dir.path() / "in", 1, 3);
  fs::remove_all(dir.path() / "in" / "chains");
  PipelineConfig c;
  c.num_augmentations = 2;
  const RunSummary s = run_video(c, dir.path() / "in", dir.path() / "out");
  EXPECT_EQ(s.failures, 2u);
  EXPECT_TRUE(s.budget_exceeded);
}

TEST(RunBaseline, OneEpisodePerSource) {
  TempDir dir("baseline");
  synth::write_tabletop_dataset(dir.path() / "in", 3, 80, 60, 1, 2);
  synth::write_patch_library(dir.path() / "patches", 4, 3);
  BaselineRun run;
  run.mode = BaselineMode::kCopyPaste;
  run.patches = dir.path() / "patches";
  const RunSummary s = run_baseline(run, dir.path() / "in", dir.path() / "out");
  EXPECT_EQ(s.manifest.episodes.size(), 3u);
  EXPECT_EQ(s.manifest.records[0].regime, "baseline:copy_paste");
  EXPECT_TRUE(validate_dataset(dir.path() / "out").ok());
}

TEST(Stats, SourceDatasetAndWarnings) {
  TempDir dir("stats");
  synth::write_tabletop_dataset(dir.path() / "in", 2, 96, 72, 3, 4);
  const DatasetStats src = compute_stats(dir.path() / "in");
  EXPECT_EQ(src.episodes, 2u);
  EXPECT_EQ(src.frames, 6u);
  EXPECT_EQ(src.records, 0u);
  EXPECT_EQ(src.object_masks, 2u);
  EXPECT_GT(src.mean_object_coverage, 0.0);
  EXPECT_LT(src.mean_object_coverage, 1.0);
  EXPECT_TRUE(src.component_frequency.empty());

  PipelineConfig c = tabletop_config(4);
  c.mesh_catalog = "nowhere.json";
  EXPECT_THROW(run_structured(c, dir.path() / "in", dir.path() / "bad"), IoError);

  // A single placement attempt per distractor leaves some requests unmet,
  // and each shortfall surfaces as a record warning.
  c = tabletop_config(4);
  c.probabilities = {0, 0, 0, 1, 0, 0};
  c.max_distractors = 8;
  c.distractor_retries = 1;
  const RunSummary s = run_structured(c, dir.path() / "in", dir.path() / "out");
  const DatasetStats out = compute_stats(dir.path() / "out");
  EXPECT_EQ(out.records, 8u);
  std::size_t warned = 0;
  for (const AugmentationRecord& r : s.manifest.records) warned += r.warnings.size();
  EXPECT_EQ(out.warnings.size(), warned);
  EXPECT_GT(warned, 0u);
  EXPECT_NE(format_stats(out).find("warnings"), std::string::npos);
  EXPECT_NE(stats_to_json(out).find("\"records\""), std::string::npos);
}

TEST(Stats, EmptyDataset) {
  TempDir dir("stats_empty");
  synth::write_dataset(dir.path(), "empty", {}, {});
  const DatasetStats s = compute_stats(dir.path());
  EXPECT_EQ(s.episodes, 0u);
  EXPECT_EQ(s.mean_object_coverage, 0.0);
  EXPECT_TRUE(validate_dataset(dir.path()).ok());
}

TEST(Validate, ReportsBrokenEpisodes) {
  TempDir dir("validate");
  synth::write_tabletop_dataset(dir.path(), 2, 64, 48, 2, 6);
  DatasetManifest m = load_manifest(dir.path());
  m.episodes[0].frame_count = 9;
  m.episodes.push_back({"ghost", 1});
  save_manifest(dir.path(), m);
  const ValidationReport r = validate_dataset(dir.path());
  EXPECT_EQ(r.episodes, 3u);
  ASSERT_EQ(r.problems.size(), 2u);
  EXPECT_NE(r.problems[0].find("manifest lists 9 frames"), std::string::npos);
  EXPECT_NE(r.problems[1].find("ghost"), std::string::npos);

  const ValidationReport none = validate_dataset(dir.path() / "missing");
  EXPECT_FALSE(none.ok());
}

}  // namespace
}  // namespace augforge
