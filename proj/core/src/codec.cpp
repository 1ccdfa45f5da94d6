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

#include "augforge/codec.hpp"

#include <png.h>
#include <openssl/evp.h>

#include <cmath>
#include <cstring>

#include "augforge/error.hpp"

namespace augforge {
namespace {

struct ReadCursor {
  std::span<const std::uint8_t> data;
  std::size_t offset = 0;
};

void read_from_span(png_structp png, png_bytep out, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->data.size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, cursor->data.data() + cursor->offset, length);
  cursor->offset += length;
}

void write_to_vector(png_structp png, png_bytep in, png_size_t length) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), in, in + length);
}

void flush_noop(png_structp) {}

[[noreturn]] void on_png_error(png_structp png, png_const_charp message) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  *err = message;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct Decoded {
  int width = 0;
  int height = 0;
  int color_type = 0;
  int bit_depth = 0;
  std::vector<std::uint8_t> rows;  // tightly packed, 16-bit samples host-endian
};

// libpng reports failures through longjmp, so nothing with a non-trivial
// destructor may be created between setjmp and the end of the function.
Decoded decode(std::span<const std::uint8_t> data) {
  if (data.size() < 8 || png_sig_cmp(data.data(), 0, 8) != 0) {
    throw FormatError("corrupt image: missing PNG signature");
  }
  std::string error;
  Decoded out;
  ReadCursor cursor{data, 0};
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, on_png_error, on_png_warning);
  if (png == nullptr) throw FormatError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt image: " + error);
  }
  png_set_read_fn(png, &cursor, read_from_span);
  png_read_info(png, info);
  png_uint_32 w = 0;
  png_uint_32 h = 0;
  int interlace = 0;
  png_get_IHDR(png, info, &w, &h, &out.bit_depth, &out.color_type, &interlace, nullptr,
               nullptr);
  if (out.bit_depth == 16) png_set_swap(png);
  if (out.color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
    out.color_type = PNG_COLOR_TYPE_RGB;
  }
  if (out.color_type == PNG_COLOR_TYPE_GRAY && out.bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
    out.bit_depth = 8;
  }
  png_read_update_info(png, info);
  out.width = static_cast<int>(w);
  out.height = static_cast<int>(h);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.rows.resize(stride * h);
  row_ptrs.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = out.rows.data() + y * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

Bytes encode(const std::uint8_t* pixels, int width, int height, int color_type, int bit_depth,
             int channels) {
  std::string error;
  Bytes out;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, on_png_error, on_png_warning);
  if (png == nullptr) throw FormatError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(pixels + y * stride);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("PNG encoding failed: " + error);
  }
  png_set_write_fn(png, &out, write_to_vector, flush_noop);
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

std::uint16_t quantize_depth_mm(float meters) {
  if (meters == 0.0f) return 0;
  if (!std::isfinite(meters) || meters < 0.0f) {
    throw InvariantError("depth " + std::to_string(meters) + " m is not storable");
  }
  const double mm = std::floor(static_cast<double>(meters) * 1000.0 + 0.5);
  if (mm > 65535.0) {
    throw InvariantError("depth " + std::to_string(meters) + " m exceeds 65.535 m");
  }
  return static_cast<std::uint16_t>(mm);
}

Bytes encode_rgb_png(const Image& image) {
  return encode(image.bytes().data(), image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, 3);
}

Image decode_rgb_png(std::span<const std::uint8_t> png) {
  Decoded d = decode(png);
  if (d.color_type != PNG_COLOR_TYPE_RGB || d.bit_depth != 8) {
    throw FormatError("corrupt image: expected 8-bit RGB PNG");
  }
  return Image(d.width, d.height, std::move(d.rows));
}

Bytes encode_mask_png(const Mask& mask) {
  std::vector<std::uint8_t> gray(mask.pixel_count());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.test_index(i) ? 255 : 0;
  return encode(gray.data(), mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, 8, 1);
}

Mask decode_mask_png(std::span<const std::uint8_t> png) {
  Decoded d = decode(png);
  if (d.color_type != PNG_COLOR_TYPE_GRAY || d.bit_depth != 8) {
    throw FormatError("corrupt image: expected 8-bit grayscale mask PNG");
  }
  Mask m(d.width, d.height);
  for (std::size_t i = 0; i < m.pixel_count(); ++i) m.set_index(i, d.rows[i] >= 128);
  return m;
}

Bytes encode_depth_png(const DepthMap& depth) {
  std::vector<std::uint16_t> mm(depth.pixel_count());
  auto values = depth.values();
  for (std::size_t i = 0; i < mm.size(); ++i) {
    mm[i] = DepthMap::is_valid(values[i]) ? quantize_depth_mm(values[i]) : 0;
  }
  return encode(reinterpret_cast<const std::uint8_t*>(mm.data()), depth.width(), depth.height(),
                PNG_COLOR_TYPE_GRAY, 16, 1);
}

DepthMap decode_depth_png(std::span<const std::uint8_t> png) {
  Decoded d = decode(png);
  if (d.color_type != PNG_COLOR_TYPE_GRAY || d.bit_depth != 16) {
    throw FormatError("corrupt image: expected 16-bit grayscale depth PNG");
  }
  DepthMap out(d.width, d.height);
  auto values = out.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint16_t mm = 0;
    std::memcpy(&mm, d.rows.data() + 2 * i, 2);
    values[i] = dequantize_depth_mm(mm);
  }
  return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw FormatError("base64: length is not a multiple of 4");
  Bytes out(3 * (text.size() / 4));
  if (text.empty()) return out;
  const std::size_t first_pad = text.find('=');
  if (first_pad != std::string_view::npos &&
      (text.size() - first_pad > 2 || text.find_first_not_of('=', first_pad) != std::string_view::npos)) {
    throw FormatError("base64: malformed padding");
  }
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw FormatError("base64: invalid character");
  std::size_t padding = 0;
  if (text.back() == '=') ++padding;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

}  // namespace augforge
