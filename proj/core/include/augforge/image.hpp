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

// Raster value types shared by every module: 8-bit RGB images, metric depth
// maps, and binary masks. All three are row-major and bounds-checked on
// construction; element accessors are unchecked.

#ifndef AUGFORGE_IMAGE_HPP_
#define AUGFORGE_IMAGE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/rect.hpp"

namespace augforge {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});
  // Takes ownership of a width*height*3 byte buffer.
  Image(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  Rgb at(int x, int y) const {
    const std::size_t i = index(x, y);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = index(x, y);
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  std::span<const std::uint8_t> bytes() const { return pixels_; }
  std::span<std::uint8_t> bytes() { return pixels_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Depth in meters. 0 marks an invalid pixel; every other value must be finite
// and positive.
class DepthMap {
 public:
  static constexpr float kInvalid = 0.0f;

  DepthMap() = default;
  DepthMap(int width, int height, float fill = kInvalid);
  DepthMap(int width, int height, std::vector<float> meters);

  static bool is_valid(float d) { return std::isfinite(d) && d > 0.0f; }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  float at(int x, int y) const {
    return meters_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, float d) {
    meters_[static_cast<std::size_t>(y) * width_ + x] = d;
  }

  std::span<const float> values() const { return meters_; }
  std::span<float> values() { return meters_; }

  // Bitwise comparison, so that NaN payloads compare equal to themselves.
  bool operator==(const DepthMap& other) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> meters_;
};

class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  bool test(int x, int y) const {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool on = true) {
    bits_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0;
  }
  bool test_index(std::size_t i) const { return bits_[i] != 0; }
  void set_index(std::size_t i, bool on = true) { bits_[i] = on ? 1 : 0; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  // Tight rectangle around the set pixels; nullopt for an empty mask.
  std::optional<Rect> bbox() const;

  void fill_rect(const Rect& r, bool on = true);

  bool operator==(const Mask&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

template <typename A, typename B>
bool same_dims(const A& a, const B& b) {
  return a.width() == b.width() && a.height() == b.height();
}

Mask mask_union(const Mask& a, const Mask& b);
Mask mask_intersection(const Mask& a, const Mask& b);
Mask mask_difference(const Mask& a, const Mask& b);
Mask mask_complement(const Mask& m);
// Chebyshev dilation: a pixel is set if any pixel within `radius` (in both
// axes) is set.
Mask dilate(const Mask& m, int radius);
double mask_iou(const Mask& a, const Mask& b);
bool masks_intersect(const Mask& a, const Mask& b);

// Copies `src` pixels where `mask` is set onto `dst`.
void copy_masked(const Image& src, const Mask& mask, Image& dst);

// Throws DimensionError naming `what` when the two rasters differ in size.
template <typename A, typename B>
void require_same_dims(const A& a, const B& b, const char* what) {
  if (!same_dims(a, b)) {
    throw DimensionError(std::string(what) + ": " + std::to_string(a.width()) +
                         "x" + std::to_string(a.height()) + " vs " +
                         std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
  }
}

}  // namespace augforge

#endif  // AUGFORGE_IMAGE_HPP_
