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

#include "augforge/image.hpp"

#include <algorithm>
#include <cstring>

namespace augforge {
namespace {

void require_positive_dims(int width, int height, const char* what) {
  if (width < 1 || height < 1) {
    throw InvariantError(std::string(what) + " dimensions must be >= 1, got " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  require_positive_dims(width, height, "image");
  pixels_.resize(pixel_count() * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  require_positive_dims(width, height, "image");
  if (pixels_.size() != pixel_count() * 3) {
    throw DimensionError("image buffer holds " + std::to_string(pixels_.size()) +
                         " bytes, expected " + std::to_string(pixel_count() * 3));
  }
}

DepthMap::DepthMap(int width, int height, float fill)
    : width_(width), height_(height) {
  require_positive_dims(width, height, "depth map");
  meters_.assign(pixel_count(), fill);
}

DepthMap::DepthMap(int width, int height, std::vector<float> meters)
    : width_(width), height_(height), meters_(std::move(meters)) {
  require_positive_dims(width, height, "depth map");
  if (meters_.size() != pixel_count()) {
    throw DimensionError("depth buffer holds " + std::to_string(meters_.size()) +
                         " values, expected " + std::to_string(pixel_count()));
  }
}

bool DepthMap::operator==(const DepthMap& other) const {
  return width_ == other.width_ && height_ == other.height_ &&
         std::memcmp(meters_.data(), other.meters_.data(),
                     meters_.size() * sizeof(float)) == 0;
}

Mask::Mask(int width, int height, bool fill) : width_(width), height_(height) {
  require_positive_dims(width, height, "mask");
  bits_.assign(pixel_count(), fill ? 1 : 0);
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::optional<Rect> Mask::bbox() const {
  Rect r{width_, height_, -1, -1};
  for (int y = 0; y < height_; ++y) {
    const std::uint8_t* row = bits_.data() + static_cast<std::size_t>(y) * width_;
    for (int x = 0; x < width_; ++x) {
      if (row[x]) {
        r.x0 = std::min(r.x0, x);
        r.x1 = std::max(r.x1, x);
        r.y0 = std::min(r.y0, y);
        r.y1 = std::max(r.y1, y);
      }
    }
  }
  if (r.x1 < 0) return std::nullopt;
  return r;
}

void Mask::fill_rect(const Rect& r, bool on) {
  const int x0 = std::max(r.x0, 0);
  const int y0 = std::max(r.y0, 0);
  const int x1 = std::min(r.x1, width_ - 1);
  const int y1 = std::min(r.y1, height_ - 1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) set(x, y, on);
  }
}

namespace {

template <typename Op>
Mask combine(const Mask& a, const Mask& b, const char* what, Op op) {
  require_same_dims(a, b, what);
  Mask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    out.set_index(i, op(a.test_index(i), b.test_index(i)));
  }
  return out;
}

}  // namespace

Mask mask_union(const Mask& a, const Mask& b) {
  return combine(a, b, "mask union", [](bool x, bool y) { return x || y; });
}

Mask mask_intersection(const Mask& a, const Mask& b) {
  return combine(a, b, "mask intersection", [](bool x, bool y) { return x && y; });
}

Mask mask_difference(const Mask& a, const Mask& b) {
  return combine(a, b, "mask difference", [](bool x, bool y) { return x && !y; });
}

Mask mask_complement(const Mask& m) {
  Mask out(m.width(), m.height());
  for (std::size_t i = 0; i < m.pixel_count(); ++i) {
    out.set_index(i, !m.test_index(i));
  }
  return out;
}

Mask dilate(const Mask& m, int radius) {
  if (radius <= 0) return m;
  const int w = m.width();
  const int h = m.height();
  // Separable max filter: horizontal pass, then vertical.
  Mask horiz(w, h);
  for (int y = 0; y < h; ++y) {
    int last_set = -1 - radius;
    for (int x = 0; x < w + radius; ++x) {
      if (x < w && m.test(x, y)) last_set = x;
      const int target = x - radius;
      if (target >= 0 && target < w) {
        // Any set pixel in [target - radius, target + radius]?
        if (last_set >= target - radius) horiz.set(target, y);
      }
    }
  }
  Mask out(w, h);
  for (int x = 0; x < w; ++x) {
    int last_set = -1 - radius;
    for (int y = 0; y < h + radius; ++y) {
      if (y < h && horiz.test(x, y)) last_set = y;
      const int target = y - radius;
      if (target >= 0 && target < h) {
        if (last_set >= target - radius) out.set(x, target);
      }
    }
  }
  return out;
}

double mask_iou(const Mask& a, const Mask& b) {
  require_same_dims(a, b, "mask iou");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    const bool x = a.test_index(i);
    const bool y = b.test_index(i);
    inter += (x && y) ? 1 : 0;
    uni += (x || y) ? 1 : 0;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

bool masks_intersect(const Mask& a, const Mask& b) {
  require_same_dims(a, b, "mask intersection test");
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    if (a.test_index(i) && b.test_index(i)) return true;
  }
  return false;
}

void copy_masked(const Image& src, const Mask& mask, Image& dst) {
  require_same_dims(src, dst, "masked copy");
  require_same_dims(src, mask, "masked copy mask");
  auto in = src.bytes();
  auto out = dst.bytes();
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (mask.test_index(i)) {
      out[3 * i] = in[3 * i];
      out[3 * i + 1] = in[3 * i + 1];
      out[3 * i + 2] = in[3 * i + 2];
    }
  }
}

}  // namespace augforge
