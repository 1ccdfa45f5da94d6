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

#include "augforge/backend.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "augforge/codec.hpp"
#include "augforge/error.hpp"
#include "augforge/seeding.hpp"

namespace augforge {

std::shared_ptr<Backend> make_http_backend(const BackendDescriptor& desc);

const char* to_string(InpaintMode mode) {
  return mode == InpaintMode::kInpaint ? "inpaint" : "depth_guided";
}

std::optional<InpaintMode> inpaint_mode_from_string(const std::string& s) {
  if (s == "inpaint") return InpaintMode::kInpaint;
  if (s == "depth_guided") return InpaintMode::kDepthGuided;
  return std::nullopt;
}

void InpaintRequest::validate() const {
  require_same_dims(image, mask, "inpaint mask");
  if (prompt.empty()) throw InvariantError("inpaint prompt must be non-empty");
  if (mode == InpaintMode::kDepthGuided) {
    if (!depth) throw InvariantError("depth-guided inpainting needs a depth map");
    require_same_dims(image, *depth, "inpaint depth");
  } else if (depth) {
    throw InvariantError("plain inpainting must not carry a depth map");
  }
}

void SegmentRequest::validate() const {
  if (image.width() < 1) throw InvariantError("segment request has no image");
  if (point && (point->x < 0 || point->y < 0 || point->x >= image.width() ||
                point->y >= image.height())) {
    throw InvariantError("segment point (" + std::to_string(point->x) + ", " +
                         std::to_string(point->y) + ") is outside the image");
  }
}

void TrackRequest::validate() const {
  require_same_dims(prev_image, next_image, "track images");
  require_same_dims(prev_image, prev_mask, "track mask");
}

Image inpaint(Backend& backend, const InpaintRequest& req) {
  req.validate();
  if (req.mask.empty()) return req.image;
  Image reply = backend.inpaint_raw(req);
  if (!same_dims(reply, req.image)) {
    throw BackendError("inpaint reply is " + std::to_string(reply.width()) + "x" +
                       std::to_string(reply.height()) + ", request was " +
                       std::to_string(req.image.width()) + "x" +
                       std::to_string(req.image.height()));
  }
  // Unmasked pixels are restored from the request whatever the server did.
  copy_masked(req.image, mask_complement(req.mask), reply);
  return reply;
}

std::vector<ScoredMask> segment(Backend& backend, const SegmentRequest& req) {
  req.validate();
  std::vector<ScoredMask> masks = backend.segment_raw(req);
  for (const ScoredMask& m : masks) {
    if (!same_dims(m.mask, req.image)) throw BackendError("segment reply mask has wrong size");
    if (!(m.score >= 0.0 && m.score <= 1.0)) {
      throw BackendError("segment reply score outside [0, 1]");
    }
  }
  std::stable_sort(masks.begin(), masks.end(),
                   [](const ScoredMask& a, const ScoredMask& b) { return a.score > b.score; });
  return masks;
}

TrackResult track(Backend& backend, const TrackRequest& req) {
  req.validate();
  TrackResult result = backend.track_raw(req);
  if (!same_dims(result.mask, req.next_image)) {
    throw BackendError("track reply mask has wrong size");
  }
  return result;
}

Rgb mock_fill_color(const std::string& prompt, std::uint64_t seed) {
  const std::uint64_t h = fnv1a64(prompt) ^ seed;
  return {static_cast<std::uint8_t>(h & 0xff), static_cast<std::uint8_t>((h >> 8) & 0xff),
          static_cast<std::uint8_t>((h >> 16) & 0xff)};
}

namespace {

std::uint32_t pack(Rgb c) {
  return (static_cast<std::uint32_t>(c.r) << 16) | (static_cast<std::uint32_t>(c.g) << 8) | c.b;
}

std::uint8_t darken(std::uint8_t v) { return v > 32 ? static_cast<std::uint8_t>(v - 32) : 0; }

std::uint8_t scale(std::uint8_t v, std::uint32_t k) {
  return static_cast<std::uint8_t>(static_cast<std::uint32_t>(v) * (256 - k) / 256);
}

}  // namespace

Rgb dominant_color(const Image& image) {
  std::unordered_map<std::uint32_t, std::size_t> counts;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) ++counts[pack(image.at(x, y))];
  }
  std::uint32_t best = 0;
  std::size_t best_count = 0;
  for (const auto& [color, n] : counts) {
    if (n > best_count || (n == best_count && color < best)) {
      best = color;
      best_count = n;
    }
  }
  return {static_cast<std::uint8_t>(best >> 16), static_cast<std::uint8_t>(best >> 8),
          static_cast<std::uint8_t>(best)};
}

std::vector<Mask> color_components(const Image& image) {
  const int w = image.width();
  const int h = image.height();
  const Rgb background = dominant_color(image);
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<Mask> out;
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t seed_index = static_cast<std::size_t>(y) * w + x;
      const Rgb color = image.at(x, y);
      if (label[seed_index] >= 0 || color == background) continue;
      const int id = static_cast<int>(out.size());
      Mask m(w, h);
      label[seed_index] = id;
      stack.assign(1, static_cast<int>(seed_index));
      while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        const int px = i % w;
        const int py = i / w;
        m.set(px, py);
        const int nx[4] = {px - 1, px + 1, px, px};
        const int ny[4] = {py, py, py - 1, py + 1};
        for (int k = 0; k < 4; ++k) {
          if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
          const std::size_t j = static_cast<std::size_t>(ny[k]) * w + nx[k];
          if (label[j] >= 0 || !(image.at(nx[k], ny[k]) == color)) continue;
          label[j] = id;
          stack.push_back(static_cast<int>(j));
        }
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

BackendInfo MockBackend::info() { return {"mock", "1", {"inpaint", "depth_guided"}}; }

Image MockBackend::inpaint_raw(const InpaintRequest& req) {
  Image out = req.image;
  const Rgb base = mock_fill_color(req.prompt, req.seed);
  std::vector<std::uint16_t> mm;
  std::uint32_t lo = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t hi = 0;
  const bool guided = req.mode == InpaintMode::kDepthGuided && req.depth.has_value();
  if (guided) {
    auto values = req.depth->values();
    mm.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      mm[i] = DepthMap::is_valid(values[i]) ? quantize_depth_mm(values[i]) : 0;
      if (mm[i] != 0) {
        lo = std::min<std::uint32_t>(lo, mm[i]);
        hi = std::max<std::uint32_t>(hi, mm[i]);
      }
    }
  }
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!req.mask.test(x, y)) continue;
      Rgb c = base;
      if ((x + y) % 2 == 0) c = {darken(c.r), darken(c.g), darken(c.b)};
      if (guided) {
        const std::uint32_t d = mm[static_cast<std::size_t>(y) * out.width() + x];
        if (d != 0 && hi > lo) {
          const std::uint32_t k = 128 * (d - lo) / (hi - lo);
          c = {scale(c.r, k), scale(c.g, k), scale(c.b, k)};
        }
      }
      out.set(x, y, c);
    }
  }
  return out;
}

std::vector<ScoredMask> MockBackend::segment_raw(const SegmentRequest& req) {
  std::vector<Mask> components = color_components(req.image);
  std::vector<ScoredMask> out;
  if (req.point) {
    for (Mask& m : components) {
      if (m.test(req.point->x, req.point->y)) {
        out.push_back({std::move(m), 1.0});
        break;
      }
    }
    return out;
  }
  std::size_t largest = 0;
  for (const Mask& m : components) largest = std::max(largest, m.count());
  for (Mask& m : components) {
    const double score = static_cast<double>(m.count()) / static_cast<double>(largest);
    out.push_back({std::move(m), score});
  }
  return out;
}

TrackResult MockBackend::track_raw(const TrackRequest& req) {
  double best_iou = -1.0;
  const Mask* best = nullptr;
  const std::vector<Mask> components = color_components(req.next_image);
  for (const Mask& m : components) {
    const double iou = mask_iou(m, req.prev_mask);
    if (iou > best_iou) {
      best_iou = iou;
      best = &m;
    }
  }
  if (best == nullptr || best_iou < kTrackIouFloor) return {req.prev_mask, true};
  return {*best, false};
}

void BackendDescriptor::validate() const {
  if (kind == BackendKind::kHttp && endpoint.empty()) {
    throw InvariantError("http backend needs an endpoint URL");
  }
  if (kind == BackendKind::kMock && !endpoint.empty()) {
    throw InvariantError("mock backend must not have an endpoint");
  }
  if (!(timeout_seconds > 0.0)) throw InvariantError("backend timeout must be positive");
  if (retries < 0) throw InvariantError("backend retries must be >= 0");
  if (max_in_flight < 1) throw InvariantError("backend max_in_flight must be >= 1");
}

std::shared_ptr<Backend> make_backend(const BackendDescriptor& desc) {
  desc.validate();
  if (desc.kind == BackendKind::kMock) return std::make_shared<MockBackend>();
  return make_http_backend(desc);
}

}  // namespace augforge
