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
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "augforge/dataset.hpp"
#include "augforge/error.hpp"
#include "augforge/seeding.hpp"
#include "augforge/version.hpp"
#include "augforge/video.hpp"
#include "json_util.hpp"

namespace augforge {
namespace fs = std::filesystem;
using detail::Json;

namespace {

constexpr const char* kRecordFile = "record.json";

// Runs body(i) for i in [0, n) on `workers` threads. Items are claimed in
// order from a shared counter.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    loop();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(loop);
}

// Source episodes are decoded once and dropped after their last item.
class EpisodeCache {
 public:
  EpisodeCache(fs::path root, const std::vector<ManifestEntry>& entries, std::size_t uses)
      : root_(std::move(root)) {
    for (const ManifestEntry& e : entries) {
      auto slot = std::make_unique<Slot>();
      slot->id = e.id;
      slot->remaining = uses;
      slots_.push_back(std::move(slot));
    }
  }

  std::shared_ptr<const Episode> acquire(std::size_t i) {
    Slot& s = *slots_[i];
    std::call_once(s.once, [&] {
      try {
        s.episode = std::make_shared<const Episode>(load_episode(root_, s.id));
      } catch (...) {
        s.error = std::current_exception();
      }
    });
    if (s.error) std::rethrow_exception(s.error);
    return s.episode;
  }

  void release(std::size_t i) {
    Slot& s = *slots_[i];
    if (--s.remaining == 0) s.episode.reset();
  }

 private:
  struct Slot {
    std::string id;
    std::once_flag once;
    std::shared_ptr<const Episode> episode;
    std::exception_ptr error;
    std::atomic<std::size_t> remaining{0};
  };
  fs::path root_;
  std::vector<std::unique_ptr<Slot>> slots_;
};

class ChainCache {
 public:
  explicit ChainCache(fs::path root) : root_(std::move(root)) {}

  std::shared_ptr<const KinematicChain> get(const std::string& ref) {
    std::lock_guard lock(mu_);
    auto& c = chains_[ref];
    if (!c) c = std::make_shared<const KinematicChain>(load_chain(chain_path(root_, ref)));
    return c;
  }

 private:
  fs::path root_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const KinematicChain>> chains_;
};

struct ItemResult {
  std::optional<AugmentationRecord> record;
  std::optional<FailureRecord> failure;
  std::size_t frames = 0;
};

void prepare_output(const fs::path& input, const fs::path& output) {
  std::error_code ec;
  if (fs::exists(output) && fs::equivalent(input, output, ec)) {
    throw InvariantError("output directory must differ from the input");
  }
  fs::create_directories(output / "episodes", ec);
  if (ec) throw IoError("cannot create " + output.string() + ": " + ec.message());
  for (const char* sub : {"chains", "meshes"}) {
    if (!fs::is_directory(input / sub)) continue;
    fs::copy(input / sub, output / sub,
             fs::copy_options::recursive | fs::copy_options::overwrite_existing, ec);
    if (ec) throw IoError(std::string("cannot copy ") + sub + ": " + ec.message());
  }
}

void write_record(const fs::path& output, const AugmentationRecord& r) {
  detail::write_text_file(episode_dir(output, r.output_id) / kRecordFile, record_to_json(r));
}

BackendSet resolve(const PipelineConfig& config, const BackendSet* given) {
  return given ? *given : make_backends(config);
}

// Collects per-item results in item order and writes the manifest.
RunSummary finish(const fs::path& output, DatasetManifest manifest,
                  std::vector<ItemResult>& results, double budget) {
  RunSummary s;
  s.items = results.size();
  for (ItemResult& r : results) {
    if (r.record) {
      manifest.episodes.push_back({r.record->output_id, r.frames});
      manifest.records.push_back(std::move(*r.record));
    } else if (r.failure) {
      manifest.failures.push_back(std::move(*r.failure));
      ++s.failures;
    }
  }
  s.budget_exceeded = static_cast<double>(s.failures) > budget * static_cast<double>(s.items);
  save_manifest(output, manifest);
  s.manifest = std::move(manifest);
  return s;
}

AugmentationRecord base_record(const std::string& source, std::uint64_t k, std::uint64_t seed,
                               const std::string& regime, Backend& backend) {
  AugmentationRecord r;
  r.source_id = source;
  r.output_id = augmented_id(source, k);
  r.aug_index = k;
  r.global_seed = seed;
  r.regime = regime;
  const BackendInfo info = backend.info();
  r.backend_name = info.name;
  r.backend_version = info.version;
  r.engine_version = kEngineVersion;
  return r;
}

void fill_structured_record(AugmentationRecord& r, const AugmentationPlan& plan,
                            const StructuredResult& res) {
  for (Component c : plan.components) r.components.push_back(to_string(c));
  if (!plan.object_prompt.empty()) r.prompts["object"] = plan.object_prompt;
  if (!plan.receptacle_prompt.empty()) r.prompts["receptacle"] = plan.receptacle_prompt;
  if (!plan.background_prompt.empty()) r.prompts["background"] = plan.background_prompt;
  if (plan.replacement_object) r.meshes["object"] = plan.replacement_object->name;
  if (plan.replacement_receptacle) r.meshes["receptacle"] = plan.replacement_receptacle->name;
  r.distractor_count = plan.distractor_count;
  for (const PlacedDistractor& d : res.distractors) {
    r.distractors.push_back({d.asset, {d.position.x(), d.position.y(), d.position.z()}, d.yaw, d.prompt});
  }
  r.seeds = plan.seeds;
  r.warnings = res.warnings;
  r.events = res.events;
  r.task_text = res.episode.task_text;
}

}  // namespace

BackendSet make_backends(const PipelineConfig& config) {
  return {make_backend(config.inpaint_backend), make_backend(config.segment_backend),
          make_backend(config.track_backend)};
}

std::string augmented_id(const std::string& source_id, std::uint64_t aug_index) {
  return source_id + "__aug" + std::to_string(aug_index);
}

MeshCatalog load_catalog_for(const PipelineConfig& config, const fs::path& input) {
  fs::path path = config.mesh_catalog;
  if (path.empty()) {
    path = input / "meshes" / "catalog.json";
    if (!fs::exists(path)) return {};
  } else if (path.is_relative()) {
    path = input / path;
  }
  return load_mesh_catalog(path);
}

RunSummary run_structured(const PipelineConfig& config, const fs::path& input,
                          const fs::path& output, const BackendSet* given) {
  config.validate();
  const DatasetManifest source = load_manifest(input);
  const MeshCatalog catalog = load_catalog_for(config, input);
  const StructuredConfig sc = config.structured();
  const BackendSet backends = resolve(config, given);
  prepare_output(input, output);

  const std::size_t per = static_cast<std::size_t>(config.num_augmentations);
  EpisodeCache cache(input, source.episodes, per);
  std::vector<ItemResult> results(source.episodes.size() * per);
  parallel_for(results.size(), config.workers, [&](std::size_t i) {
    const std::size_t e = i / per;
    const std::uint64_t k = i % per;
    const std::string& id = source.episodes[e].id;
    ItemResult& out = results[i];
    try {
      std::shared_ptr<const Episode> ep = cache.acquire(e);
      if (auto problems = validate_episode_structure(*ep); !problems.empty()) {
        throw InvariantError("invalid source episode: " + problems.front());
      }
      const AugmentationPlan plan = plan_augmentation(sc, catalog, *ep, k, config.global_seed);
      StructuredResult res = augment_structured(*ep, plan, sc, catalog, *backends.inpaint);
      AugmentationRecord r = base_record(id, k, config.global_seed, "structured", *backends.inpaint);
      fill_structured_record(r, plan, res);
      res.episode.id = r.output_id;
      save_episode(output, res.episode);
      write_record(output, r);
      out.frames = res.episode.frames.size();
      out.record = std::move(r);
    } catch (const std::exception& ex) {
      out.failure = FailureRecord{id, k, ex.what()};
    }
    cache.release(e);
  });

  DatasetManifest manifest;
  manifest.dataset_id = source.dataset_id + "-structured";
  return finish(output, std::move(manifest), results, config.failure_budget);
}

RunSummary run_video(const PipelineConfig& config, const fs::path& input, const fs::path& output,
                     const BackendSet* given) {
  config.validate();
  const DatasetManifest source = load_manifest(input);
  const VideoConfig vc = config.video();
  const BackendSet backends = resolve(config, given);
  prepare_output(input, output);

  // With originals, slot 0 of each episode copies the source through.
  const std::size_t extra = config.include_originals ? 1 : 0;
  const std::size_t per = static_cast<std::size_t>(config.num_augmentations) + extra;
  EpisodeCache cache(input, source.episodes, per);
  ChainCache chains(input);
  std::vector<ItemResult> results(source.episodes.size() * per);
  std::vector<std::optional<ManifestEntry>> originals(results.size());
  parallel_for(results.size(), config.workers, [&](std::size_t i) {
    const std::size_t e = i / per;
    const std::size_t slot = i % per;
    const std::string& id = source.episodes[e].id;
    const std::uint64_t k = slot - extra;
    ItemResult& out = results[i];
    try {
      std::shared_ptr<const Episode> ep = cache.acquire(e);
      if (slot < extra) {
        save_episode(output, *ep);
        originals[i] = ManifestEntry{ep->id, ep->frames.size()};
      } else {
        if (ep->chain_ref.empty()) throw InvariantError("episode has no chain_ref");
        std::shared_ptr<const KinematicChain> chain = chains.get(ep->chain_ref);
        if (auto problems = validate_episode(*ep, *chain); !problems.empty()) {
          throw InvariantError("invalid source episode: " + problems.front());
        }
        const VideoPlan plan = plan_video(vc, *ep, k, config.global_seed);
        VideoResult res = augment_trajectory(
            *ep, plan, *chain, {backends.inpaint.get(), backends.segment.get(), backends.track.get()},
            vc);
        AugmentationRecord r = base_record(id, k, config.global_seed, "video", *backends.inpaint);
        if (plan.object) {
          r.components.push_back("object_texture");
          r.prompts["object"] = plan.object_prompt;
          r.seeds["object"] = plan.object_seed;
        }
        if (plan.background) {
          r.components.push_back("table_background");
          r.prompts["background"] = plan.background_prompt;
        }
        r.warnings = res.warnings;
        r.events = res.events;
        r.task_text = res.episode.task_text;
        res.episode.id = r.output_id;
        save_episode(output, res.episode);
        write_record(output, r);
        out.frames = res.episode.frames.size();
        out.record = std::move(r);
      }
    } catch (const std::exception& ex) {
      out.failure = FailureRecord{id, k, ex.what()};
      if (slot < extra) out.failure->aug_index = 0;
    }
    cache.release(e);
  });

  DatasetManifest manifest;
  manifest.dataset_id = source.dataset_id + "-video";
  std::vector<ItemResult> augmented;
  std::size_t copied = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (originals[i]) {
      manifest.episodes.push_back(*originals[i]);
      ++copied;
    } else {
      augmented.push_back(std::move(results[i]));
    }
  }
  RunSummary s = finish(output, std::move(manifest), augmented, config.failure_budget);
  s.items += copied;
  return s;
}

RunSummary run_baseline(const BaselineRun& run, const fs::path& input, const fs::path& output) {
  if (run.workers < 1) throw InvariantError("workers must be >= 1");
  const DatasetManifest source = load_manifest(input);
  std::vector<Patch> library;
  if (run.mode != BaselineMode::kSpatial || !run.patches.empty()) {
    library = load_patch_library(run.patches);
  }
  prepare_output(input, output);
  const std::string regime = std::string("baseline:") + to_string(run.mode);
  MockBackend none;
  EpisodeCache cache(input, source.episodes, 1);
  std::vector<ItemResult> results(source.episodes.size());
  parallel_for(results.size(), run.workers, [&](std::size_t e) {
    const std::string& id = source.episodes[e].id;
    ItemResult& out = results[e];
    try {
      std::shared_ptr<const Episode> ep = cache.acquire(e);
      if (ep->frames.empty()) throw InvariantError("episode has no frames");
      std::vector<Mask> protected_masks;
      if (ep->object_mask) protected_masks.push_back(*ep->object_mask);
      if (ep->receptacle_mask) protected_masks.push_back(*ep->receptacle_mask);
      const std::uint64_t seed = derive_seed(run.seed, id, 0, 0, regime);
      Episode aug = *ep;
      aug.frames[0] = baseline_augment(ep->frames[0], ep->primary_index(), run.mode, library,
                                       protected_masks, seed, run.options);
      AugmentationRecord r;
      r.source_id = id;
      r.output_id = augmented_id(id, 0);
      r.global_seed = run.seed;
      r.regime = regime;
      r.seeds["baseline"] = seed;
      r.task_text = aug.task_text;
      r.engine_version = kEngineVersion;
      r.backend_name = "none";
      aug.id = r.output_id;
      save_episode(output, aug);
      write_record(output, r);
      out.frames = aug.frames.size();
      out.record = std::move(r);
    } catch (const std::exception& ex) {
      out.failure = FailureRecord{id, 0, ex.what()};
    }
    cache.release(e);
  });
  DatasetManifest manifest;
  manifest.dataset_id = source.dataset_id + "-" + to_string(run.mode);
  return finish(output, std::move(manifest), results, run.failure_budget);
}

AugmentationPlan plan_from_record(const AugmentationRecord& record, const MeshCatalog& catalog) {
  AugmentationPlan plan;
  for (const std::string& name : record.components) {
    auto c = component_from_string(name);
    if (!c) throw FormatError("record names unknown component '" + name + "'");
    plan.components.push_back(*c);
  }
  auto prompt = [&](const char* key) {
    auto it = record.prompts.find(key);
    return it == record.prompts.end() ? std::string() : it->second;
  };
  plan.object_prompt = prompt("object");
  plan.receptacle_prompt = prompt("receptacle");
  plan.background_prompt = prompt("background");
  auto mesh = [&](const char* key) -> const MeshAsset* {
    auto it = record.meshes.find(key);
    if (it == record.meshes.end()) return nullptr;
    const MeshAsset* a = catalog.find(it->second);
    if (!a) throw FormatError("record names unknown mesh '" + it->second + "'");
    return a;
  };
  plan.replacement_object = mesh("object");
  plan.replacement_receptacle = mesh("receptacle");
  plan.distractor_count = record.distractor_count;
  plan.seeds = record.seeds;
  return plan;
}

Episode reproduce_structured(const PipelineConfig& config, const fs::path& input,
                             const AugmentationRecord& record, const BackendSet& backends) {
  const MeshCatalog catalog = load_catalog_for(config, input);
  const Episode source = load_episode(input, record.source_id);
  const AugmentationPlan plan = plan_from_record(record, catalog);
  StructuredResult res =
      augment_structured(source, plan, config.structured(), catalog, *backends.inpaint);
  res.episode.id = record.output_id;
  return res.episode;
}

ValidationReport validate_dataset(const fs::path& root) {
  ValidationReport report;
  DatasetManifest manifest;
  try {
    manifest = load_manifest(root);
  } catch (const Error& e) {
    report.problems.push_back(e.what());
    return report;
  }
  std::map<std::string, std::optional<KinematicChain>> chains;
  for (const ManifestEntry& entry : manifest.episodes) {
    ++report.episodes;
    const std::string where = "episode '" + entry.id + "': ";
    try {
      const Episode e = load_episode(root, entry.id);
      if (e.frames.size() != entry.frame_count) {
        report.problems.push_back(where + "manifest lists " + std::to_string(entry.frame_count) +
                                  " frames, found " + std::to_string(e.frames.size()));
      }
      std::vector<std::string> problems;
      if (e.chain_ref.empty()) {
        problems = validate_episode_structure(e);
      } else {
        auto it = chains.find(e.chain_ref);
        if (it == chains.end()) {
          std::optional<KinematicChain> c;
          try {
            c = load_chain(chain_path(root, e.chain_ref));
          } catch (const Error& err) {
            report.problems.push_back(where + err.what());
          }
          it = chains.emplace(e.chain_ref, std::move(c)).first;
        }
        problems = it->second ? validate_episode(e, *it->second) : validate_episode_structure(e);
      }
      for (const std::string& p : problems) report.problems.push_back(where + p);
    } catch (const Error& err) {
      report.problems.push_back(where + err.what());
    }
  }
  return report;
}

DatasetStats compute_stats(const fs::path& root) {
  const DatasetManifest manifest = load_manifest(root);
  DatasetStats s;
  s.dataset_id = manifest.dataset_id;
  s.episodes = manifest.episodes.size();
  s.records = manifest.records.size();
  s.failures = manifest.failures.size();
  double obj = 0.0;
  double rec = 0.0;
  for (const ManifestEntry& entry : manifest.episodes) {
    const EpisodeSummary sum = summarize_episode(root, entry.id);
    s.frames += sum.frame_count;
    if (!sum.object_label.empty()) ++s.labels[sum.object_label];
    if (!sum.receptacle_label.empty()) ++s.labels[sum.receptacle_label];
    if (sum.object_coverage) {
      ++s.object_masks;
      obj += *sum.object_coverage;
    }
    if (sum.receptacle_coverage) {
      ++s.receptacle_masks;
      rec += *sum.receptacle_coverage;
    }
  }
  if (s.object_masks) s.mean_object_coverage = obj / s.object_masks;
  if (s.receptacle_masks) s.mean_receptacle_coverage = rec / s.receptacle_masks;
  std::map<std::string, std::size_t> counts;
  for (const AugmentationRecord& r : manifest.records) {
    for (const std::string& c : r.components) ++counts[c];
    for (const std::string& w : r.warnings) s.warnings.push_back(r.output_id + ": " + w);
  }
  for (const auto& [c, n] : counts) {
    s.component_frequency[c] = static_cast<double>(n) / static_cast<double>(s.records);
  }
  return s;
}

std::string stats_to_json(const DatasetStats& s) {
  Json j = {{"dataset_id", s.dataset_id},
            {"episodes", s.episodes},
            {"frames", s.frames},
            {"records", s.records},
            {"failures", s.failures},
            {"object_masks", s.object_masks},
            {"receptacle_masks", s.receptacle_masks},
            {"mean_object_coverage", s.mean_object_coverage},
            {"mean_receptacle_coverage", s.mean_receptacle_coverage},
            {"labels", s.labels},
            {"component_frequency", s.component_frequency},
            {"warnings", s.warnings}};
  return detail::dump_json(j);
}

std::string format_stats(const DatasetStats& s) {
  std::ostringstream out;
  char buf[64];
  out << "dataset    " << s.dataset_id << "\n";
  out << "episodes   " << s.episodes << "\n";
  out << "frames     " << s.frames << "\n";
  out << "records    " << s.records << "\n";
  out << "failures   " << s.failures << "\n";
  std::snprintf(buf, sizeof buf, "%.4f", s.mean_object_coverage);
  out << "object mask coverage      " << buf << " (" << s.object_masks << " masks)\n";
  std::snprintf(buf, sizeof buf, "%.4f", s.mean_receptacle_coverage);
  out << "receptacle mask coverage  " << buf << " (" << s.receptacle_masks << " masks)\n";
  if (!s.labels.empty()) {
    out << "labels\n";
    for (const auto& [label, n] : s.labels) out << "  " << label << "  " << n << "\n";
  }
  if (!s.component_frequency.empty()) {
    out << "component frequency\n";
    for (const auto& [c, f] : s.component_frequency) {
      std::snprintf(buf, sizeof buf, "%.3f", f);
      out << "  " << c << "  " << buf << "\n";
    }
  }
  if (!s.warnings.empty()) {
    out << "warnings (" << s.warnings.size() << ")\n";
    for (const std::string& w : s.warnings) out << "  " << w << "\n";
  }
  return out.str();
}

}  // namespace augforge
