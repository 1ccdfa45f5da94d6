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

// Service contracts for generation, segmentation, and tracking.
//
// Callers go through the free functions inpaint(), segment() and track(),
// which validate requests and replies and enforce client-side guarantees
// (notably: inpainting never alters pixels outside the mask) no matter which
// backend produced the reply.

#ifndef AUGFORGE_BACKEND_HPP_
#define AUGFORGE_BACKEND_HPP_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "augforge/image.hpp"

namespace augforge {

enum class InpaintMode { kInpaint, kDepthGuided };

const char* to_string(InpaintMode mode);
std::optional<InpaintMode> inpaint_mode_from_string(const std::string& s);

struct InpaintRequest {
  Image image;
  // Set pixels are the region to synthesize.
  Mask mask;
  // Present iff mode is kDepthGuided.
  std::optional<DepthMap> depth;
  std::string prompt;
  std::uint64_t seed = 0;
  InpaintMode mode = InpaintMode::kInpaint;

  // Throws InvariantError / DimensionError.
  void validate() const;
};

struct PixelCoord {
  int x = 0;
  int y = 0;

  bool operator==(const PixelCoord&) const = default;
};

struct SegmentRequest {
  Image image;
  // Absent: segment everything.
  std::optional<PixelCoord> point;

  void validate() const;
};

struct ScoredMask {
  Mask mask;
  double score = 0.0;
};

struct TrackRequest {
  Image prev_image;
  Image next_image;
  Mask prev_mask;

  void validate() const;
};

struct TrackResult {
  Mask mask;
  // The tracker lost the object and returned prev_mask unchanged. Optional on
  // the wire; servers that do not report it are assumed to have tracked.
  bool fallback = false;
};

struct BackendInfo {
  std::string name;
  std::string version;
  std::vector<std::string> modes;
};

class Backend {
 public:
  virtual ~Backend() = default;

  virtual BackendInfo info() = 0;
  virtual Image inpaint_raw(const InpaintRequest& req) = 0;
  virtual std::vector<ScoredMask> segment_raw(const SegmentRequest& req) = 0;
  virtual TrackResult track_raw(const TrackRequest& req) = 0;
};

Image inpaint(Backend& backend, const InpaintRequest& req);
// Sorted by descending score (stable); every mask matches the image size.
std::vector<ScoredMask> segment(Backend& backend, const SegmentRequest& req);
TrackResult track(Backend& backend, const TrackRequest& req);

// Deterministic procedural stand-in for the generative services.
//
//  - inpaint: masked pixels take the colour given by bytes 0..2 (least
//    significant first) of FNV-1a-64(prompt) XOR seed, darkened by 32 where
//    (x + y) is even. In depth-guided mode each channel is further scaled by
//    (256 - k) / 256 with k = 128 * (mm - min_mm) / (max_mm - min_mm), using
//    integer millimetre depth and integer division throughout.
//  - segment: 4-connected components of equal colour among pixels that differ
//    from the most frequent colour; score = area / largest area. A point
//    prompt returns the component under the point with score 1, or nothing.
//  - track: the component of next_image with the highest IoU against
//    prev_mask, or prev_mask itself (fallback) if the best IoU is below 0.1.
class MockBackend final : public Backend {
 public:
  static constexpr double kTrackIouFloor = 0.1;

  BackendInfo info() override;
  Image inpaint_raw(const InpaintRequest& req) override;
  std::vector<ScoredMask> segment_raw(const SegmentRequest& req) override;
  TrackResult track_raw(const TrackRequest& req) override;
};

// Background colour and component masks as the mock segmenter defines them,
// in raster order of each component's first pixel.
std::vector<Mask> color_components(const Image& image);
Rgb dominant_color(const Image& image);

// Fill colour the mock uses before stippling and depth modulation.
Rgb mock_fill_color(const std::string& prompt, std::uint64_t seed);

enum class BackendKind { kMock, kHttp };

struct BackendDescriptor {
  BackendKind kind = BackendKind::kMock;
  // Base URL such as "http://127.0.0.1:8080"; required for kHttp.
  std::string endpoint;
  double timeout_seconds = 120.0;
  int retries = 2;
  int max_in_flight = 4;

  void validate() const;
};

std::shared_ptr<Backend> make_backend(const BackendDescriptor& desc);

}  // namespace augforge

#endif  // AUGFORGE_BACKEND_HPP_
