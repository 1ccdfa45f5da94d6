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

// PNG and base64 codecs for the raster types. Encoding is deterministic:
// identical rasters always produce identical bytes.

#ifndef AUGFORGE_CODEC_HPP_
#define AUGFORGE_CODEC_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augforge/image.hpp"

namespace augforge {

using Bytes = std::vector<std::uint8_t>;

// Millimeter quantization with round-half-up; 0 stays the invalid sentinel.
// Throws InvariantError above 65.535 m or for non-finite/negative depth.
std::uint16_t quantize_depth_mm(float meters);
inline float dequantize_depth_mm(std::uint16_t mm) {
  return static_cast<float>(static_cast<double>(mm) / 1000.0);
}

Bytes encode_rgb_png(const Image& image);
Image decode_rgb_png(std::span<const std::uint8_t> png);

// 8-bit grayscale, 255 = member. Decoding treats values >= 128 as members.
Bytes encode_mask_png(const Mask& mask);
Mask decode_mask_png(std::span<const std::uint8_t> png);

// 16-bit grayscale millimeters.
Bytes encode_depth_png(const DepthMap& depth);
DepthMap decode_depth_png(std::span<const std::uint8_t> png);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws FormatError on characters outside the standard alphabet or bad
// padding.
Bytes base64_decode(std::string_view text);

}  // namespace augforge

#endif  // AUGFORGE_CODEC_HPP_
