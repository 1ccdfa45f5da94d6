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

#include "augforge/config.hpp"

#include <set>

#include "augforge/error.hpp"
#include "json_util.hpp"

namespace augforge {

using detail::Json;

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& what) {
  if (!j.is_object()) throw FormatError(what + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw FormatError(what + ": unknown key '" + key + "'");
  }
}

const char* kind_name(BackendKind k) { return k == BackendKind::kHttp ? "http" : "mock"; }

BackendDescriptor backend_from(const Json& j, const std::string& what) {
  reject_unknown(j, {"kind", "endpoint", "timeout_seconds", "retries", "max_in_flight"}, what);
  BackendDescriptor d;
  const std::string kind = detail::get_or<std::string>(j, "kind", "mock");
  if (kind == "mock") {
    d.kind = BackendKind::kMock;
  } else if (kind == "http") {
    d.kind = BackendKind::kHttp;
  } else {
    throw FormatError(what + ": unknown backend kind '" + kind + "'");
  }
  d.endpoint = detail::get_or<std::string>(j, "endpoint", "");
  d.timeout_seconds = detail::get_or<double>(j, "timeout_seconds", d.timeout_seconds);
  d.retries = detail::get_or<int>(j, "retries", d.retries);
  d.max_in_flight = detail::get_or<int>(j, "max_in_flight", d.max_in_flight);
  return d;
}

Json backend_to(const BackendDescriptor& d) {
  return {{"kind", kind_name(d.kind)},
          {"endpoint", d.endpoint},
          {"timeout_seconds", d.timeout_seconds},
          {"retries", d.retries},
          {"max_in_flight", d.max_in_flight}};
}

}  // namespace

void PipelineConfig::validate() const {
  if (num_augmentations < 1) throw InvariantError("num_augmentations must be >= 1");
  if (workers < 1) throw InvariantError("workers must be >= 1");
  if (!(failure_budget >= 0.0 && failure_budget <= 1.0)) {
    throw InvariantError("failure_budget must be in [0, 1]");
  }
  structured().validate();
  video().validate();
  inpaint_backend.validate();
  segment_backend.validate();
  track_backend.validate();
}

StructuredConfig PipelineConfig::structured() const {
  StructuredConfig c;
  c.probabilities = probabilities;
  c.max_distractors = max_distractors;
  c.grammar = grammar;
  c.background_noun = background_noun;
  c.workspace = workspace;
  c.dilation_px = dilation_px;
  c.distractor_retries = distractor_retries;
  c.scale_jitter = scale_jitter;
  return c;
}

VideoConfig PipelineConfig::video() const {
  VideoConfig c;
  c.object_probability = video_object_probability;
  c.background_probability = video_background_probability;
  c.grammar = grammar;
  c.background_noun = background_noun;
  c.reseed_after = reseed_after;
  c.robot_inflation = robot_inflation;
  return c;
}

PipelineConfig parse_config_json(const std::string& text) {
  const Json j = detail::parse_json(text, "config");
  reject_unknown(j,
                 {"global_seed", "num_augmentations", "workers", "probabilities",
                  "max_distractors", "grammar", "background_noun", "workspace", "mesh_catalog",
                  "dilation_px", "distractor_retries", "scale_jitter", "video",
                  "include_originals", "backends", "failure_budget"},
                 "config");
  PipelineConfig c;
  c.global_seed = detail::get_or<std::uint64_t>(j, "global_seed", c.global_seed);
  c.num_augmentations = detail::get_or<int>(j, "num_augmentations", c.num_augmentations);
  c.workers = detail::get_or<int>(j, "workers", c.workers);
  c.max_distractors = detail::get_or<int>(j, "max_distractors", c.max_distractors);
  c.background_noun = detail::get_or<std::string>(j, "background_noun", c.background_noun);
  c.mesh_catalog = detail::get_or<std::string>(j, "mesh_catalog", "");
  c.dilation_px = detail::get_or<int>(j, "dilation_px", c.dilation_px);
  c.distractor_retries = detail::get_or<int>(j, "distractor_retries", c.distractor_retries);
  c.scale_jitter = detail::get_or<double>(j, "scale_jitter", c.scale_jitter);
  c.include_originals = detail::get_or<bool>(j, "include_originals", c.include_originals);
  c.failure_budget = detail::get_or<double>(j, "failure_budget", c.failure_budget);

  if (auto it = j.find("probabilities"); it != j.end()) {
    std::set<std::string> known;
    for (Component comp : kAllComponents) known.insert(to_string(comp));
    reject_unknown(*it, known, "config.probabilities");
    ComponentProbabilities& p = c.probabilities;
    p.table_background = detail::get_or<double>(*it, "table_background", p.table_background);
    p.object_texture = detail::get_or<double>(*it, "object_texture", p.object_texture);
    p.object_shape = detail::get_or<double>(*it, "object_shape", p.object_shape);
    p.distractors = detail::get_or<double>(*it, "distractors", p.distractors);
    p.receptacle_texture = detail::get_or<double>(*it, "receptacle_texture", p.receptacle_texture);
    p.receptacle_shape = detail::get_or<double>(*it, "receptacle_shape", p.receptacle_shape);
  }
  if (auto it = j.find("grammar"); it != j.end()) {
    reject_unknown(*it, {"colors", "materials", "template"}, "config.grammar");
    c.grammar.colors = detail::get_or<std::vector<std::string>>(*it, "colors", c.grammar.colors);
    c.grammar.materials =
        detail::get_or<std::vector<std::string>>(*it, "materials", c.grammar.materials);
    c.grammar.template_text = detail::get_or<std::string>(*it, "template", c.grammar.template_text);
  }
  if (auto it = j.find("workspace"); it != j.end()) {
    reject_unknown(*it, {"x_min", "x_max", "y_min", "y_max", "table_height", "resolution"},
                   "config.workspace");
    Workspace& w = c.workspace;
    w.x_min = detail::get_or<double>(*it, "x_min", w.x_min);
    w.x_max = detail::get_or<double>(*it, "x_max", w.x_max);
    w.y_min = detail::get_or<double>(*it, "y_min", w.y_min);
    w.y_max = detail::get_or<double>(*it, "y_max", w.y_max);
    w.table_height = detail::get_or<double>(*it, "table_height", w.table_height);
    w.topdown_resolution = detail::get_or<double>(*it, "resolution", w.topdown_resolution);
  }
  if (auto it = j.find("video"); it != j.end()) {
    reject_unknown(*it, {"object_probability", "background_probability", "reseed_after",
                         "robot_inflation"},
                   "config.video");
    c.video_object_probability =
        detail::get_or<double>(*it, "object_probability", c.video_object_probability);
    c.video_background_probability =
        detail::get_or<double>(*it, "background_probability", c.video_background_probability);
    c.reseed_after = detail::get_or<int>(*it, "reseed_after", c.reseed_after);
    c.robot_inflation = detail::get_or<double>(*it, "robot_inflation", c.robot_inflation);
  }
  if (auto it = j.find("backends"); it != j.end()) {
    reject_unknown(*it, {"inpaint", "segment", "track"}, "config.backends");
    if (auto b = it->find("inpaint"); b != it->end()) {
      c.inpaint_backend = backend_from(*b, "config.backends.inpaint");
    }
    if (auto b = it->find("segment"); b != it->end()) {
      c.segment_backend = backend_from(*b, "config.backends.segment");
    }
    if (auto b = it->find("track"); b != it->end()) {
      c.track_backend = backend_from(*b, "config.backends.track");
    }
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config_json(detail::read_text_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const PipelineConfig& c) {
  Json probs = Json::object();
  for (Component comp : kAllComponents) probs[to_string(comp)] = c.probabilities.of(comp);
  const Workspace& w = c.workspace;
  Json j = {
      {"global_seed", c.global_seed},
      {"num_augmentations", c.num_augmentations},
      {"workers", c.workers},
      {"probabilities", probs},
      {"max_distractors", c.max_distractors},
      {"grammar",
       {{"colors", c.grammar.colors},
        {"materials", c.grammar.materials},
        {"template", c.grammar.template_text}}},
      {"background_noun", c.background_noun},
      {"workspace",
       {{"x_min", w.x_min},
        {"x_max", w.x_max},
        {"y_min", w.y_min},
        {"y_max", w.y_max},
        {"table_height", w.table_height},
        {"resolution", w.topdown_resolution}}},
      {"mesh_catalog", c.mesh_catalog.generic_string()},
      {"dilation_px", c.dilation_px},
      {"distractor_retries", c.distractor_retries},
      {"scale_jitter", c.scale_jitter},
      {"video",
       {{"object_probability", c.video_object_probability},
        {"background_probability", c.video_background_probability},
        {"reseed_after", c.reseed_after},
        {"robot_inflation", c.robot_inflation}}},
      {"include_originals", c.include_originals},
      {"backends",
       {{"inpaint", backend_to(c.inpaint_backend)},
        {"segment", backend_to(c.segment_backend)},
        {"track", backend_to(c.track_backend)}}},
      {"failure_budget", c.failure_budget},
  };
  return detail::dump_json(j);
}

void use_http_backends(PipelineConfig& config, const std::string& endpoint) {
  for (BackendDescriptor* d : {&config.inpaint_backend, &config.segment_backend, &config.track_backend}) {
    d->kind = BackendKind::kHttp;
    d->endpoint = endpoint;
  }
}

void use_mock_backends(PipelineConfig& config) {
  for (BackendDescriptor* d : {&config.inpaint_backend, &config.segment_backend, &config.track_backend}) {
    d->kind = BackendKind::kMock;
  }
}

}  // namespace augforge
