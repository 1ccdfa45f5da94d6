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

// augforge: dataset augmentation command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure, 3 the run
// exceeded its failure budget.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "augforge/config.hpp"
#include "augforge/error.hpp"
#include "augforge/pipeline.hpp"
#include "augforge/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

struct RunFlags {
  std::string input;
  std::string output;
  std::string config;
  std::optional<int> num_augmentations;
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::string backend_url;
  std::optional<int> workers;
  bool include_originals = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--input", f.input, "Source dataset directory")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--output", f.output, "Output dataset directory")->required();
  cmd->add_option("--config", f.config, "Pipeline config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--num-augmentations", f.num_augmentations, "Augmentations per episode");
  cmd->add_option("--seed", f.seed, "Global seed");
  cmd->add_option("--backend", f.backend, "Generative backend")->check(CLI::IsMember({"mock", "http"}));
  cmd->add_option("--backend-url", f.backend_url, "Backend base URL")->envname("AUGFORGE_BACKEND_URL");
  cmd->add_option("--workers", f.workers, "Worker threads");
}

augforge::PipelineConfig resolve_config(const RunFlags& f) {
  augforge::PipelineConfig c = f.config.empty() ? augforge::PipelineConfig{} : augforge::load_config(f.config);
  if (f.num_augmentations) c.num_augmentations = *f.num_augmentations;
  if (f.seed) c.global_seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.include_originals) c.include_originals = true;
  if (f.backend == "mock") {
    augforge::use_mock_backends(c);
  } else if (f.backend == "http") {
    const std::string url = f.backend_url.empty() ? c.inpaint_backend.endpoint : f.backend_url;
    if (url.empty()) {
      throw augforge::InvariantError("--backend http needs --backend-url or AUGFORGE_BACKEND_URL");
    }
    augforge::use_http_backends(c, url);
  } else if (!f.backend_url.empty()) {
    for (auto* d : {&c.inpaint_backend, &c.segment_backend, &c.track_backend}) {
      if (d->kind == augforge::BackendKind::kHttp) d->endpoint = f.backend_url;
    }
  }
  c.validate();
  return c;
}

int report_validation(const augforge::ValidationReport& r) {
  for (const std::string& p : r.problems) std::cerr << "invalid: " << p << "\n";
  if (!r.ok()) {
    std::cerr << r.problems.size() << " problem(s) in " << r.episodes << " episode(s)\n";
    return kExitInvalid;
  }
  return kExitOk;
}

int report_run(const augforge::RunSummary& s, const std::string& output) {
  for (const augforge::FailureRecord& f : s.manifest.failures) {
    std::cerr << "failed: " << f.source_id << " #" << f.aug_index << ": " << f.error << "\n";
  }
  std::cout << "wrote " << s.manifest.episodes.size() << " episode(s) to " << output << " ("
            << s.failures << " of " << s.items << " item(s) failed)\n";
  if (s.budget_exceeded) {
    std::cerr << "failure budget exceeded\n";
    return kExitBudget;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augforge: structure-aware augmentation of robot demonstration datasets"};
  app.set_version_flag("--version", std::string(augforge::kEngineVersion));
  app.require_subcommand(1);

  RunFlags structured_flags;
  CLI::App* structured = app.add_subcommand("augment-structured", "Augment annotated observations");
  add_run_flags(structured, structured_flags);

  RunFlags video_flags;
  CLI::App* video = app.add_subcommand("augment-video", "Augment whole trajectories");
  add_run_flags(video, video_flags);
  video->add_flag("--include-originals", video_flags.include_originals,
                  "Copy source trajectories into the output");

  std::string validate_input;
  CLI::App* validate = app.add_subcommand("validate", "Check a dataset against its invariants");
  validate->add_option("--input", validate_input)->required()->check(CLI::ExistingDirectory);

  std::string stats_input;
  bool stats_json = false;
  CLI::App* stats = app.add_subcommand("stats", "Summarize a dataset");
  stats->add_option("--input", stats_input)->required()->check(CLI::ExistingDirectory);
  stats->add_flag("--json", stats_json, "Machine-readable output");

  std::string base_input;
  std::string base_output;
  std::string base_mode;
  std::string base_patches;
  std::uint64_t base_seed = 0;
  int base_workers = 1;
  CLI::App* baseline = app.add_subcommand("baseline", "Run an RGB-only comparison augmenter");
  baseline->add_option("--input", base_input)->required()->check(CLI::ExistingDirectory);
  baseline->add_option("--output", base_output)->required();
  baseline->add_option("--mode", base_mode)
      ->required()
      ->check(CLI::IsMember({"copy_paste", "random_background", "random_distractors", "spatial"}));
  baseline->add_option("--patches", base_patches, "Patch library directory");
  baseline->add_option("--seed", base_seed);
  baseline->add_option("--workers", base_workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*structured || *video) {
      const RunFlags& f = *structured ? structured_flags : video_flags;
      augforge::PipelineConfig config;
      try {
        config = resolve_config(f);
      } catch (const augforge::Error& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kExitUsage;
      }
      if (int rc = report_validation(augforge::validate_dataset(f.input)); rc != kExitOk) return rc;
      const augforge::RunSummary s = *structured
                                         ? augforge::run_structured(config, f.input, f.output)
                                         : augforge::run_video(config, f.input, f.output);
      return report_run(s, f.output);
    }
    if (*validate) {
      const augforge::ValidationReport r = augforge::validate_dataset(validate_input);
      const int rc = report_validation(r);
      if (rc == kExitOk) std::cout << r.episodes << " episode(s) valid\n";
      return rc;
    }
    if (*stats) {
      const augforge::DatasetStats s = augforge::compute_stats(stats_input);
      std::cout << (stats_json ? augforge::stats_to_json(s) : augforge::format_stats(s));
      return kExitOk;
    }
    if (*baseline) {
      augforge::BaselineRun run;
      run.mode = *augforge::baseline_mode_from_string(base_mode);
      run.patches = base_patches;
      run.seed = base_seed;
      run.workers = base_workers;
      if (run.mode != augforge::BaselineMode::kSpatial && base_patches.empty()) {
        std::cerr << "--patches is required for mode " << base_mode << "\n";
        return kExitUsage;
      }
      if (int rc = report_validation(augforge::validate_dataset(base_input)); rc != kExitOk) return rc;
      return report_run(augforge::run_baseline(run, base_input, base_output), base_output);
    }
  } catch (const augforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
