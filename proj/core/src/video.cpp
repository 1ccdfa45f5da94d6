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

#include "augforge/video.hpp"

#include <cmath>

#include "augforge/error.hpp"
#include "augforge/raster.hpp"
#include "augforge/seeding.hpp"

namespace augforge {
namespace {

constexpr int kMaxPlanAttempts = 64;

std::optional<PixelCoord> in_image(const std::optional<Projection>& p, int w, int h) {
  if (!p) return std::nullopt;
  const long x = std::lround(p->u);
  const long y = std::lround(p->v);
  if (x < 0 || y < 0 || x >= w || y >= h) return std::nullopt;
  return PixelCoord{static_cast<int>(x), static_cast<int>(y)};
}

}  // namespace

std::optional<Projection> end_effector_pixel(const KinematicChain& chain,
                                             std::span<const double> joints,
                                             const CameraModel& camera) {
  const FkResult fk = forward_kinematics(chain, joints);
  return project_point(camera, fk.end_effector.translation);
}

Mask robot_mask(const KinematicChain& chain, std::span<const double> joints,
                const CameraModel& camera, int width, int height, double inflation) {
  if (chain.dof() > 0 && chain.links.empty()) {
    throw InvariantError("chain '" + chain.name + "' has no link geometry");
  }
  if (!(inflation > 0.0)) throw InvariantError("robot mask inflation must be positive");
  const FkResult fk = forward_kinematics(chain, joints);
  TriangleMesh mesh;
  for (const LinkPrimitive& link : chain.links) {
    const RigidTransform& frame = fk.joint_frames.at(link.joint);
    if (const auto* c = std::get_if<Capsule>(&link.shape)) {
      mesh.append(make_capsule_mesh(frame.apply(c->a), frame.apply(c->b), c->radius * inflation));
    } else {
      const Box& b = std::get<Box>(link.shape);
      mesh.append(make_box_mesh(b.half_extents * inflation).transformed(frame * b.pose));
    }
  }
  if (mesh.triangles.empty()) return Mask(width, height);
  return render_triangles(mesh.vertices, mesh.triangles, camera, width, height).mask;
}

Mask seed_object_mask(const Image& image, PixelCoord seed_pixel, Backend& segmenter,
                      const Mask& robot) {
  require_same_dims(image, robot, "robot mask");
  if (seed_pixel.x < 0 || seed_pixel.y < 0 || seed_pixel.x >= image.width() ||
      seed_pixel.y >= image.height()) {
    throw InvariantError("seed pixel outside the frame");
  }
  SegmentRequest req;
  req.image = image;
  req.point = seed_pixel;
  for (const ScoredMask& m : segment(segmenter, req)) {
    if (m.mask.test(seed_pixel.x, seed_pixel.y)) return mask_difference(m.mask, robot);
  }
  return Mask(image.width(), image.height());
}

TrackOutcome track_object(const Episode& episode, std::size_t view, const Mask& initial,
                          Backend& tracker, const std::optional<ReseedContext>& reseed) {
  if (episode.frames.empty()) throw InvariantError("episode has no frames");
  const auto rgb = [&](std::size_t t) -> const Image& { return episode.frames[t].views.at(view).rgb; };
  require_same_dims(rgb(0), initial, "initial mask");

  TrackOutcome out;
  out.masks.push_back(initial);
  int fallbacks = 0;
  for (std::size_t t = 1; t < episode.frames.size(); ++t) {
    const std::string where = "frame " + std::to_string(t) + ": ";
    TrackResult r;
    try {
      r = track(tracker, {rgb(t - 1), rgb(t), out.masks.back()});
    } catch (const Error& e) {
      throw Error(where + "tracking failed: " + e.what());
    }
    if (!r.fallback) {
      fallbacks = 0;
      out.masks.push_back(std::move(r.mask));
      continue;
    }
    ++fallbacks;
    out.events.push_back(where + "tracker fallback");
    if (reseed && reseed->chain && reseed->segmenter && fallbacks >= reseed->after) {
      fallbacks = 0;
      const Image& img = rgb(t);
      const auto& joints = episode.frames[t].joints;
      const auto px =
          in_image(end_effector_pixel(*reseed->chain, joints, reseed->camera), img.width(), img.height());
      Mask seeded(img.width(), img.height());
      if (px) {
        const Mask robot = robot_mask(*reseed->chain, joints, reseed->camera, img.width(),
                                      img.height(), reseed->inflation);
        seeded = seed_object_mask(img, *px, *reseed->segmenter, robot);
      }
      if (!seeded.empty()) {
        out.events.push_back(where + "re-seeded from end effector (" +
                             std::to_string(seeded.count()) + " px)");
        r.mask = std::move(seeded);
      } else {
        out.events.push_back(where + "re-seed failed");
      }
    }
    out.masks.push_back(std::move(r.mask));
  }
  return out;
}

std::vector<Mask> background_candidates(const Image& image, const Mask& robot,
                                        const Mask& object, Backend& segmenter) {
  require_same_dims(image, robot, "robot mask");
  require_same_dims(image, object, "object mask");
  const Mask blocked = mask_union(robot, object);
  SegmentRequest req;
  req.image = image;
  std::vector<Mask> out;
  for (ScoredMask& m : segment(segmenter, req)) {
    if (!masks_intersect(m.mask, blocked)) out.push_back(std::move(m.mask));
  }
  return out;
}

Mask aggregate_masks(std::span<const Mask> masks) {
  if (masks.empty()) throw InvariantError("cannot aggregate an empty mask list");
  Mask out = masks.front();
  for (const Mask& m : masks.subspan(1)) {
    require_same_dims(out, m, "aggregated mask");
    out = mask_union(out, m);
  }
  return out;
}

void VideoConfig::validate() const {
  for (double p : {object_probability, background_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvariantError("video probability outside [0, 1]");
  }
  grammar.validate();
  if (background_noun.empty()) throw InvariantError("background_noun is empty");
  if (reseed_after < 1) throw InvariantError("reseed_after must be >= 1");
  if (!(robot_inflation > 0.0)) throw InvariantError("robot_inflation must be positive");
}

std::uint64_t VideoPlan::background_seed(std::size_t frame, const std::string& camera) const {
  return derive_seed(global_seed, episode_id, aug_index, frame, "video/background/" + camera);
}

VideoPlan plan_video(const VideoConfig& config, const Episode& episode, std::uint64_t aug_index,
                     std::uint64_t global_seed) {
  config.validate();
  VideoPlan plan;
  plan.global_seed = global_seed;
  plan.aug_index = aug_index;
  plan.episode_id = episode.id;
  auto derive = [&](const std::string& tag) {
    return derive_seed(global_seed, episode.id, aug_index, 0, tag);
  };
  for (int attempt = 0; attempt < kMaxPlanAttempts && !plan.object && !plan.background; ++attempt) {
    const std::string n = std::to_string(attempt);
    plan.object = SeededRng(derive("video/plan/object/" + n)).uniform() < config.object_probability;
    plan.background =
        SeededRng(derive("video/plan/background/" + n)).uniform() < config.background_probability;
  }
  if (!plan.object && !plan.background) throw InvariantError("empty plan unreachable");
  plan.object_seed = derive("video/object");
  const std::string noun =
      episode.object_label.empty() ? "object" : strip_article(episode.object_label);
  if (plan.object) {
    plan.object_prompt = sample_prompt(config.grammar, noun, split_seed(plan.object_seed, "prompt"));
  }
  if (plan.background) {
    plan.background_prompt =
        sample_prompt(config.grammar, config.background_noun, derive("video/background/prompt"));
  }
  return plan;
}

VideoResult augment_trajectory(const Episode& episode, const VideoPlan& plan,
                               const KinematicChain& chain, const VideoBackends& backends,
                               const VideoConfig& config) {
  if (!backends.inpaint || !backends.segment || !backends.track) {
    throw InvariantError("video augmentation needs inpaint, segment and track backends");
  }
  if (episode.frames.empty()) throw InvariantError("episode '" + episode.id + "' has no frames");
  for (std::size_t t = 0; t < episode.frames.size(); ++t) {
    if (episode.frames[t].joints.size() != chain.dof()) {
      throw InvariantError("frame " + std::to_string(t) + " has " +
                           std::to_string(episode.frames[t].joints.size()) + " joints, chain '" +
                           chain.name + "' has " + std::to_string(chain.dof()));
    }
  }

  VideoResult res;
  res.episode = episode;
  for (std::size_t v = 0; v < episode.cameras.size(); ++v) {
    const NamedCamera& cam = episode.cameras[v];
    const int w = cam.width;
    const int h = cam.height;
    TrajectoryMasks tm;
    tm.camera = cam.name;
    const std::string vtag = "view " + cam.name + ", ";

    for (const Frame& f : episode.frames) {
      tm.robot.push_back(robot_mask(chain, f.joints, cam.model, w, h, config.robot_inflation));
    }

    Mask initial(w, h);
    const Image& first = episode.frames[0].views.at(v).rgb;
    if (auto px = in_image(end_effector_pixel(chain, episode.frames[0].joints, cam.model), w, h)) {
      try {
        initial = seed_object_mask(first, *px, *backends.segment, tm.robot[0]);
      } catch (const Error& e) {
        throw Error(vtag + "frame 0: segmentation failed: " + e.what());
      }
    }
    if (initial.empty()) {
      res.warnings.push_back(vtag + "no object found under the end effector");
      tm.object.assign(episode.frames.size(), Mask(w, h));
    } else {
      ReseedContext ctx;
      ctx.chain = &chain;
      ctx.camera = cam.model;
      ctx.segmenter = backends.segment;
      ctx.inflation = config.robot_inflation;
      ctx.after = config.reseed_after;
      TrackOutcome tr = track_object(episode, v, initial, *backends.track, ctx);
      for (const std::string& e : tr.events) res.events.push_back(vtag + e);
      for (std::size_t t = 0; t < tr.masks.size(); ++t) {
        tm.object.push_back(mask_difference(tr.masks[t], tm.robot[t]));
      }
    }

    for (std::size_t t = 0; t < episode.frames.size(); ++t) {
      const std::string where = vtag + "frame " + std::to_string(t) + ": ";
      const Image& original = episode.frames[t].views[v].rgb;
      Image rgb = original;
      try {
        if (plan.object && !tm.object[t].empty()) {
          InpaintRequest req{rgb, tm.object[t], std::nullopt, plan.object_prompt, plan.object_seed,
                             InpaintMode::kInpaint};
          rgb = inpaint(*backends.inpaint, req);
        }
        std::vector<Mask> candidates;
        if (plan.background) {
          candidates = background_candidates(original, tm.robot[t], tm.object[t], *backends.segment);
          if (!candidates.empty()) {
            InpaintRequest req{rgb, aggregate_masks(candidates), std::nullopt,
                               plan.background_prompt, plan.background_seed(t, cam.name),
                               InpaintMode::kInpaint};
            rgb = inpaint(*backends.inpaint, req);
          }
        }
        tm.candidates.push_back(std::move(candidates));
      } catch (const Error& e) {
        throw Error(where + e.what());
      }
      res.episode.frames[t].views[v].rgb = std::move(rgb);
    }
    res.masks.push_back(std::move(tm));
  }
  return res;
}

}  // namespace augforge
