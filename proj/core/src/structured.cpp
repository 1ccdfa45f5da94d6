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

#include "augforge/structured.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "augforge/error.hpp"
#include "augforge/raster.hpp"
#include "augforge/seeding.hpp"

namespace augforge {
namespace {

constexpr int kMaxPlanAttempts = 64;
constexpr int kScaleIterations = 8;

const CameraView& checked_view(const Frame& frame, std::size_t view) {
  if (view >= frame.views.size()) {
    throw InvariantError("view index " + std::to_string(view) + " out of range (" +
                         std::to_string(frame.views.size()) + " views)");
  }
  return frame.views[view];
}

const DepthMap& require_depth(const CameraView& v) {
  if (!v.depth) throw InvariantError("view '" + v.camera + "' has no depth");
  require_same_dims(v.rgb, *v.depth, "rgb vs depth");
  return *v.depth;
}

Mask union_of(const std::vector<Mask>& masks, int w, int h) {
  Mask out(w, h);
  for (const Mask& m : masks) {
    require_same_dims(m, out, "protected mask");
    out = mask_union(out, m);
  }
  return out;
}

// Local point that sits on the support surface: center of the bottom face of
// the bounding box, with +z as up.
Vec3 footprint_anchor(const MeshAsset& asset) {
  const auto [lo, hi] = asset.bounds();
  return {(lo.x() + hi.x()) / 2.0, (lo.y() + hi.y()) / 2.0, lo.z()};
}

MeshAsset scaled(const MeshAsset& asset, double s) {
  MeshAsset out = asset;
  for (Vec3& v : out.vertices) v = s * v;
  return out;
}

// Horizontal pixel extent of the projected vertices, or nullopt if any
// vertex is behind the camera.
std::optional<double> projected_width(const MeshAsset& mesh, const RigidTransform& pose,
                                      const CameraModel& camera) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec3& v : mesh.vertices) {
    auto p = project_point(camera, pose.apply(v));
    if (!p) return std::nullopt;
    lo = std::min(lo, p->u);
    hi = std::max(hi, p->u);
  }
  return hi - lo + 1.0;
}

// Nearest valid depth pixel to (u, v) by growing square rings.
std::optional<std::pair<int, int>> nearest_valid(const DepthMap& d, int u, int v) {
  const int limit = std::max(d.width(), d.height());
  for (int r = 0; r < limit; ++r) {
    for (int y = v - r; y <= v + r; ++y) {
      for (int x = u - r; x <= u + r; ++x) {
        if (std::max(std::abs(x - u), std::abs(y - v)) != r) continue;
        if (x < 0 || y < 0 || x >= d.width() || y >= d.height()) continue;
        if (DepthMap::is_valid(d.at(x, y))) return std::make_pair(x, y);
      }
    }
  }
  return std::nullopt;
}

Image inpaint_view(Backend& backend, const CameraView& v, const Mask& region,
                   const std::optional<DepthMap>& depth, const std::string& prompt,
                   std::uint64_t seed) {
  InpaintRequest req;
  req.image = v.rgb;
  req.mask = region;
  req.depth = depth;
  req.prompt = prompt;
  req.seed = seed;
  req.mode = depth ? InpaintMode::kDepthGuided : InpaintMode::kInpaint;
  return inpaint(backend, req);
}

std::string component_tag(Component c) { return std::string("plan/") + to_string(c); }

}  // namespace

const char* to_string(Component c) {
  switch (c) {
    case Component::kTableBackground: return "table_background";
    case Component::kObjectTexture: return "object_texture";
    case Component::kObjectShape: return "object_shape";
    case Component::kDistractors: return "distractors";
    case Component::kReceptacleTexture: return "receptacle_texture";
    case Component::kReceptacleShape: return "receptacle_shape";
  }
  return "unknown";
}

std::optional<Component> component_from_string(const std::string& s) {
  for (Component c : kAllComponents) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

double ComponentProbabilities::of(Component c) const {
  switch (c) {
    case Component::kTableBackground: return table_background;
    case Component::kObjectTexture: return object_texture;
    case Component::kObjectShape: return object_shape;
    case Component::kDistractors: return distractors;
    case Component::kReceptacleTexture: return receptacle_texture;
    case Component::kReceptacleShape: return receptacle_shape;
  }
  return 0.0;
}

void ComponentProbabilities::validate() const {
  for (Component c : kAllComponents) {
    const double p = of(c);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvariantError(std::string("probability of ") + to_string(c) + " outside [0, 1]");
    }
  }
}

void StructuredConfig::validate() const {
  probabilities.validate();
  grammar.validate();
  workspace.validate();
  if (max_distractors < 0) throw InvariantError("max_distractors must be >= 0");
  if (dilation_px < 0) throw InvariantError("dilation_px must be >= 0");
  if (distractor_retries < 1) throw InvariantError("distractor_retries must be >= 1");
  if (!(scale_jitter >= 0.0 && scale_jitter < 1.0)) {
    throw InvariantError("scale_jitter must be in [0, 1)");
  }
  if (background_noun.empty()) throw InvariantError("background_noun is empty");
}

bool AugmentationPlan::has(Component c) const {
  return std::find(components.begin(), components.end(), c) != components.end();
}

std::uint64_t AugmentationPlan::seed(const std::string& name) const {
  auto it = seeds.find(name);
  if (it == seeds.end()) throw InvariantError("plan has no seed named '" + name + "'");
  return it->second;
}

AugmentationPlan plan_augmentation(const StructuredConfig& config, const MeshCatalog& catalog,
                                   const Episode& episode, std::uint64_t aug_index,
                                   std::uint64_t global_seed) {
  config.validate();
  if (!episode.object_mask || !episode.receptacle_mask) {
    throw InvariantError("episode '" + episode.id + "' lacks object/receptacle masks");
  }
  if (episode.object_label.empty() || episode.receptacle_label.empty()) {
    throw InvariantError("episode '" + episode.id + "' lacks object/receptacle labels");
  }
  auto derive = [&](const std::string& tag) {
    return derive_seed(global_seed, episode.id, aug_index, 0, tag);
  };

  const std::string object_noun = strip_article(episode.object_label);
  const std::string receptacle_noun = strip_article(episode.receptacle_label);
  auto replacements = [&](RoleTag role, const std::string& current) {
    std::vector<const MeshAsset*> out;
    for (const MeshAsset* a : catalog.with_role(role)) {
      if (a->prompt_noun != current) out.push_back(a);
    }
    return out;
  };
  const auto object_pool = replacements(RoleTag::kObject, object_noun);
  const auto receptacle_pool = replacements(RoleTag::kReceptacle, receptacle_noun);
  const bool have_distractors =
      !catalog.with_role(RoleTag::kDistractor).empty() && config.max_distractors > 0;

  auto available = [&](Component c) {
    switch (c) {
      case Component::kObjectShape: return !object_pool.empty();
      case Component::kReceptacleShape: return !receptacle_pool.empty();
      case Component::kDistractors: return have_distractors;
      default: return true;
    }
  };

  AugmentationPlan plan;
  for (int attempt = 0; attempt < kMaxPlanAttempts && plan.components.empty(); ++attempt) {
    for (Component c : kAllComponents) {
      if (!available(c)) continue;
      SeededRng rng(derive(component_tag(c) + "/" + std::to_string(attempt)));
      if (rng.uniform() < config.probabilities.of(c)) plan.components.push_back(c);
    }
  }
  if (plan.components.empty()) throw InvariantError("empty plan unreachable");

  for (const char* name : {"object", "receptacle", "distractors", "background"}) {
    plan.seeds[name] = derive(name);
  }
  plan.seeds["object_asset"] = derive("object/asset");
  plan.seeds["receptacle_asset"] = derive("receptacle/asset");

  std::string object_prompt_noun = object_noun;
  if (plan.has(Component::kObjectShape)) {
    SeededRng rng(plan.seeds["object_asset"]);
    plan.replacement_object = object_pool[rng.index(object_pool.size())];
    object_prompt_noun = plan.replacement_object->prompt_noun;
  }
  std::string receptacle_prompt_noun = receptacle_noun;
  if (plan.has(Component::kReceptacleShape)) {
    SeededRng rng(plan.seeds["receptacle_asset"]);
    plan.replacement_receptacle = receptacle_pool[rng.index(receptacle_pool.size())];
    receptacle_prompt_noun = plan.replacement_receptacle->prompt_noun;
  }
  if (plan.has(Component::kDistractors)) {
    SeededRng rng(split_seed(plan.seeds["distractors"], "count"));
    plan.distractor_count = 1 + static_cast<int>(rng.index(config.max_distractors));
  }
  if (plan.has(Component::kObjectTexture) || plan.has(Component::kObjectShape)) {
    plan.object_prompt = sample_prompt(config.grammar, object_prompt_noun,
                                       split_seed(plan.seeds["object"], "prompt"));
  }
  if (plan.has(Component::kReceptacleTexture) || plan.has(Component::kReceptacleShape)) {
    plan.receptacle_prompt = sample_prompt(config.grammar, receptacle_prompt_noun,
                                           split_seed(plan.seeds["receptacle"], "prompt"));
  }
  if (plan.has(Component::kTableBackground)) {
    plan.background_prompt = sample_prompt(config.grammar, config.background_noun,
                                           split_seed(plan.seeds["background"], "prompt"));
  }
  return plan;
}

DepthMap backfill_depth(const DepthMap& depth, const Mask& hole) {
  require_same_dims(depth, hole, "backfill hole");
  const int w = depth.width();
  const int h = depth.height();
  DepthMap out = depth;
  auto usable = [&](int x, int y) { return !hole.test(x, y) && DepthMap::is_valid(depth.at(x, y)); };
  static constexpr int kDirs[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!hole.test(x, y)) continue;
      double sum = 0.0;
      int n = 0;
      for (const auto& d : kDirs) {
        for (int cx = x + d[0], cy = y + d[1]; cx >= 0 && cy >= 0 && cx < w && cy < h;
             cx += d[0], cy += d[1]) {
          if (usable(cx, cy)) {
            sum += depth.at(cx, cy);
            ++n;
            break;
          }
        }
      }
      if (n == 0) {
        throw InvariantError("depth backfill impossible at pixel (" + std::to_string(x) +
                             ", " + std::to_string(y) + ")");
      }
      out.set(x, y, static_cast<float>(sum / n));
    }
  }
  return out;
}

Frame augment_in_category(const Frame& frame, std::size_t view, const Mask& mask,
                          const std::string& prompt, std::uint64_t seed, Backend& backend) {
  const CameraView& v = checked_view(frame, view);
  const DepthMap& depth = require_depth(v);
  require_same_dims(v.rgb, mask, "in-category mask");
  if (mask.empty()) throw InvariantError("in-category edit mask is empty");
  Frame out = frame;
  out.views[view].rgb = inpaint_view(backend, v, mask, depth, prompt, seed);
  return out;
}

CrossCategoryResult augment_cross_category(const Frame& frame, std::size_t view,
                                           const Mask& old_mask, const MeshAsset& asset,
                                           const std::string& prompt, std::uint64_t seed,
                                           const CameraModel& camera, Backend& backend,
                                           const CrossCategoryOptions& options) {
  const CameraView& v = checked_view(frame, view);
  const DepthMap& depth = require_depth(v);
  require_same_dims(v.rgb, old_mask, "cross-category mask");
  const auto old_box = old_mask.bbox();
  if (!old_box) throw InvariantError("cross-category old mask is empty");
  asset.validate();
  const int w = v.rgb.width();
  const int h = v.rgb.height();

  const DepthMap filled = backfill_depth(depth, old_mask);
  const int u = (old_box->x0 + old_box->x1) / 2;
  const auto anchor_px = nearest_valid(filled, u, old_box->y1);
  if (!anchor_px) throw InvariantError("no valid depth to anchor the replacement");
  const Vec3 anchor = back_project(camera, anchor_px->first, anchor_px->second,
                                   filled.at(anchor_px->first, anchor_px->second));

  SeededRng rng(split_seed(seed, "scale"));
  const double jitter = rng.uniform(-options.scale_jitter, options.scale_jitter);
  const double target = old_box->width() * (1.0 + jitter);
  const Vec3 base = footprint_anchor(asset);
  // The base point of the scaled mesh lands on the anchor.
  auto pose_for = [&](double scale) { return RigidTransform::from_translation(anchor - scale * base); };
  double s = 1.0;
  for (int i = 0; i < kScaleIterations; ++i) {
    const auto width = projected_width(scaled(asset, s), pose_for(s), camera);
    if (!width || *width <= 0.0) throw InvariantError("replacement mesh is behind the camera");
    const double ratio = target / *width;
    s *= ratio;
    if (std::abs(ratio - 1.0) < 1e-4) break;
  }

  const RigidTransform pose = pose_for(s);
  RenderResult r = render_mesh_depth(scaled(asset, s), pose, camera, w, h);
  Mask visible = r.mask;
  if (options.keep_out) visible = mask_difference(visible, *options.keep_out);
  if (visible.empty()) throw InvariantError("replacement asset projects off-screen");

  CrossCategoryResult out;
  out.frame = frame;
  CameraView& ov = out.frame.views[view];
  ov.depth = composite_depth(filled, r.depth, visible);
  out.edit_region = dilate(mask_union(old_mask, visible), options.dilation_px);
  if (options.keep_out) out.edit_region = mask_difference(out.edit_region, *options.keep_out);
  ov.rgb = inpaint_view(backend, ov, out.edit_region, ov.depth, prompt, seed);
  out.new_mask = std::move(visible);
  out.pose = pose;
  out.scale = s;
  return out;
}

DistractorResult place_distractors(const Frame& frame, std::size_t view,
                                   const std::vector<Mask>& protected_masks,
                                   const std::vector<const MeshAsset*>& assets, int count,
                                   std::uint64_t seed, const CameraModel& camera,
                                   Backend& backend, const DistractorOptions& options) {
  const CameraView& v = checked_view(frame, view);
  require_depth(v);
  options.workspace.validate();
  const int w = v.rgb.width();
  const int h = v.rgb.height();

  DistractorResult out;
  out.frame = frame;
  out.edit_region = Mask(w, h);
  Mask blocked = union_of(protected_masks, w, h);
  std::vector<Rect> taken;
  for (const Mask& m : protected_masks) {
    if (auto b = m.bbox()) taken.push_back(*b);
  }
  if (assets.empty() || count <= 0) return out;

  const Workspace& ws = options.workspace;
  SeededRng rng(seed);
  CameraView& ov = out.frame.views[view];
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < options.retries; ++attempt) {
      ++out.attempts;
      const MeshAsset& asset = *assets[rng.index(assets.size())];
      const double x = rng.uniform(ws.x_min, ws.x_max);
      const double y = rng.uniform(ws.y_min, ws.y_max);
      const double yaw = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const RigidTransform pose =
          RigidTransform::from_translation({x, y, ws.table_height}) *
          RigidTransform::from_axis_angle(Vec3::UnitZ(), yaw) *
          RigidTransform::from_translation(-footprint_anchor(asset));
      RenderResult r = render_mesh_depth(asset, pose, camera, w, h);
      const auto box = r.mask.bbox();
      if (!box) continue;
      const bool collides = std::any_of(taken.begin(), taken.end(),
                                        [&](const Rect& t) { return bboxes_overlap(*box, t); });
      if (collides) continue;

      const std::string tag = std::to_string(i);
      PlacedDistractor p;
      p.asset = asset.name;
      p.pose = pose;
      p.position = {x, y, ws.table_height};
      p.yaw = yaw;
      p.prompt = sample_prompt(options.grammar, asset.prompt_noun, split_seed(seed, "prompt/" + tag));
      ov.depth = composite_depth(*ov.depth, r.depth, r.mask);
      const Mask region = mask_difference(dilate(r.mask, options.dilation_px), blocked);
      ov.rgb = inpaint_view(backend, ov, region, ov.depth, p.prompt,
                            split_seed(seed, "inpaint/" + tag));
      out.edit_region = mask_union(out.edit_region, region);
      blocked = mask_union(blocked, r.mask);
      taken.push_back(*box);
      p.mask = std::move(r.mask);
      p.depth = std::move(r.depth);
      out.placed.push_back(std::move(p));
      break;
    }
  }
  return out;
}

Frame augment_background(const Frame& frame, std::size_t view,
                         const std::vector<Mask>& protected_masks, const std::string& prompt,
                         std::uint64_t seed, Backend& backend) {
  const CameraView& v = checked_view(frame, view);
  const Mask region =
      mask_complement(union_of(protected_masks, v.rgb.width(), v.rgb.height()));
  if (region.empty()) return frame;
  Frame out = frame;
  out.views[view].rgb = inpaint_view(backend, v, region, std::nullopt, prompt, seed);
  return out;
}

StructuredResult augment_structured(const Episode& episode, const AugmentationPlan& plan,
                                    const StructuredConfig& config, const MeshCatalog& catalog,
                                    Backend& backend) {
  if (episode.frames.empty()) throw InvariantError("episode '" + episode.id + "' has no frames");
  if (!episode.object_mask || !episode.receptacle_mask) {
    throw InvariantError("episode '" + episode.id + "' lacks object/receptacle masks");
  }
  const std::size_t view = episode.primary_index();
  const CameraModel& camera = episode.cameras[view].model;

  StructuredResult res;
  res.episode = episode;
  Frame frame = episode.frames[0];
  const CameraView& v0 = checked_view(frame, view);
  Mask object = *episode.object_mask;
  Mask receptacle = *episode.receptacle_mask;
  require_same_dims(v0.rgb, object, "object mask");
  require_same_dims(v0.rgb, receptacle, "receptacle mask");
  res.edit_region = Mask(v0.rgb.width(), v0.rgb.height());

  auto relabel = [&](std::string& label, const MeshAsset& asset) {
    const std::string new_label = with_article(asset.prompt_noun);
    RewriteResult rw = rewrite_language(res.episode.task_text, label, new_label);
    if (rw.warning) res.warnings.push_back(*rw.warning);
    res.events.push_back("language: '" + label + "' -> '" + new_label + "'");
    res.episode.task_text = rw.text;
    label = new_label;
  };

  // Object first, then receptacle; each keeps its hands off the other.
  struct Role {
    Component texture;
    Component shape;
    Mask* mask;
    Mask* other;
    const MeshAsset* replacement;
    const std::string* prompt;
    const char* seed_name;
    std::string* label;
  };
  Role roles[] = {
      {Component::kObjectTexture, Component::kObjectShape, &object, &receptacle,
       plan.replacement_object, &plan.object_prompt, "object", &res.episode.object_label},
      {Component::kReceptacleTexture, Component::kReceptacleShape, &receptacle, &object,
       plan.replacement_receptacle, &plan.receptacle_prompt, "receptacle",
       &res.episode.receptacle_label},
  };
  for (Role& role : roles) {
    const std::uint64_t seed = plan.seed(role.seed_name);
    try {
      if (plan.has(role.shape)) {
        if (!role.replacement) throw InvariantError("shape component without replacement mesh");
        CrossCategoryOptions opts;
        opts.dilation_px = config.dilation_px;
        opts.scale_jitter = config.scale_jitter;
        opts.keep_out = *role.other;
        CrossCategoryResult cc = augment_cross_category(frame, view, *role.mask, *role.replacement,
                                                        *role.prompt, seed, camera, backend, opts);
        frame = std::move(cc.frame);
        res.edit_region = mask_union(res.edit_region, cc.edit_region);
        *role.mask = std::move(cc.new_mask);
        res.events.push_back(std::string(role.seed_name) + ": replaced by " +
                             role.replacement->name + " (scale " + std::to_string(cc.scale) + ")");
        relabel(*role.label, *role.replacement);
      } else if (plan.has(role.texture)) {
        const Mask region = mask_difference(dilate(*role.mask, config.dilation_px), *role.other);
        frame = augment_in_category(frame, view, region, *role.prompt, seed, backend);
        res.edit_region = mask_union(res.edit_region, region);
        res.events.push_back(std::string(role.seed_name) + ": retextured");
      }
    } catch (const Error& e) {
      throw Error("frame 0, " + std::string(role.seed_name) + ": " + e.what());
    }
  }

  std::vector<Mask> protected_masks{object, receptacle};
  if (plan.has(Component::kDistractors)) {
    DistractorOptions opts;
    opts.workspace = config.workspace;
    opts.grammar = config.grammar;
    opts.retries = config.distractor_retries;
    opts.dilation_px = config.dilation_px;
    DistractorResult d =
        place_distractors(frame, view, protected_masks, catalog.with_role(RoleTag::kDistractor),
                          plan.distractor_count, plan.seed("distractors"), camera, backend, opts);
    frame = std::move(d.frame);
    res.edit_region = mask_union(res.edit_region, d.edit_region);
    if (static_cast<int>(d.placed.size()) < plan.distractor_count) {
      res.warnings.push_back("placed " + std::to_string(d.placed.size()) + " of " +
                             std::to_string(plan.distractor_count) + " distractors");
    }
    for (PlacedDistractor& p : d.placed) {
      protected_masks.push_back(p.mask);
      res.events.push_back("distractor: " + p.asset);
    }
    res.distractors = std::move(d.placed);
  }
  if (plan.has(Component::kTableBackground)) {
    frame = augment_background(frame, view, protected_masks, plan.background_prompt,
                               plan.seed("background"), backend);
    const Mask& any = protected_masks.front();
    res.edit_region = mask_union(res.edit_region,
                                 mask_complement(union_of(protected_masks, any.width(), any.height())));
    res.events.push_back("background: replaced");
  }

  res.episode.frames[0] = std::move(frame);
  res.episode.object_mask = std::move(object);
  res.episode.receptacle_mask = std::move(receptacle);
  return res;
}

}  // namespace augforge
