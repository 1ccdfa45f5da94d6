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

#include "augforge/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "augforge/codec.hpp"
#include "augforge/error.hpp"
#include "augforge/seeding.hpp"
#include "json_util.hpp"

namespace augforge {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kRgbSuffix = ".rgb.png";
constexpr std::string_view kMaskSuffix = ".mask.png";

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void paste(const Patch& p, int ox, int oy, Image& dst) {
  for (int y = 0; y < p.rgb.height(); ++y) {
    for (int x = 0; x < p.rgb.width(); ++x) {
      const int tx = ox + x;
      const int ty = oy + y;
      if (!p.mask.test(x, y) || tx < 0 || ty < 0 || tx >= dst.width() || ty >= dst.height()) {
        continue;
      }
      dst.set(tx, ty, p.rgb.at(x, y));
    }
  }
}

// Top-left offset keeping the patch inside the frame where possible.
std::pair<int, int> random_offset(SeededRng& rng, const Patch& p, int w, int h) {
  const int span_x = std::max(1, w - p.rgb.width() + 1);
  const int span_y = std::max(1, h - p.rgb.height() + 1);
  return {static_cast<int>(rng.index(span_x)), static_cast<int>(rng.index(span_y))};
}

const Patch& pick(SeededRng& rng, const std::vector<Patch>& library) {
  return library[rng.index(library.size())];
}

// Averages the nearest pixels outside `hole` in the four axis directions.
void fill_from_surroundings(Image& img, const Mask& hole) {
  const Image src = img;
  static constexpr int kDirs[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!hole.test(x, y)) continue;
      int sum[3] = {0, 0, 0};
      int n = 0;
      for (const auto& d : kDirs) {
        for (int cx = x + d[0], cy = y + d[1];
             cx >= 0 && cy >= 0 && cx < img.width() && cy < img.height(); cx += d[0], cy += d[1]) {
          if (hole.test(cx, cy)) continue;
          const Rgb c = src.at(cx, cy);
          sum[0] += c.r;
          sum[1] += c.g;
          sum[2] += c.b;
          ++n;
          break;
        }
      }
      if (n > 0) {
        img.set(x, y, {static_cast<std::uint8_t>(sum[0] / n), static_cast<std::uint8_t>(sum[1] / n),
                       static_cast<std::uint8_t>(sum[2] / n)});
      }
    }
  }
}

Image spatial_jitter(const Image& rgb, const Mask& object, SeededRng& rng,
                     const BaselineOptions& o) {
  const auto box = object.bbox();
  if (!box) return rgb;
  const double tx = rng.uniform(-o.max_translation_px, o.max_translation_px);
  const double ty = rng.uniform(-o.max_translation_px, o.max_translation_px);
  const double theta = rng.uniform(-o.max_rotation_rad, o.max_rotation_rad);
  const double cx = (box->x0 + box->x1) / 2.0;
  const double cy = (box->y0 + box->y1) / 2.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  Image out = rgb;
  Mask moved(rgb.width(), rgb.height());
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      // Inverse map: destination -> source about the bbox center.
      const double dx = x - cx - tx;
      const double dy = y - cy - ty;
      const int sx = static_cast<int>(std::lround(c * dx + s * dy + cx));
      const int sy = static_cast<int>(std::lround(-s * dx + c * dy + cy));
      if (sx < 0 || sy < 0 || sx >= rgb.width() || sy >= rgb.height()) continue;
      if (!object.test(sx, sy)) continue;
      out.set(x, y, rgb.at(sx, sy));
      moved.set(x, y);
    }
  }
  fill_from_surroundings(out, mask_difference(object, moved));
  return out;
}

}  // namespace

const char* to_string(BaselineMode mode) {
  switch (mode) {
    case BaselineMode::kCopyPaste: return "copy_paste";
    case BaselineMode::kRandomBackground: return "random_background";
    case BaselineMode::kRandomDistractors: return "random_distractors";
    case BaselineMode::kSpatial: return "spatial";
  }
  return "unknown";
}

std::optional<BaselineMode> baseline_mode_from_string(const std::string& s) {
  for (BaselineMode m : {BaselineMode::kCopyPaste, BaselineMode::kRandomBackground,
                         BaselineMode::kRandomDistractors, BaselineMode::kSpatial}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::vector<Patch> load_patch_library(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("patch library '" + dir.string() + "' is not a directory");
  std::set<std::string> rgb_names;
  std::set<std::string> mask_names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string f = entry.path().filename().string();
    if (ends_with(f, kRgbSuffix)) rgb_names.insert(f.substr(0, f.size() - kRgbSuffix.size()));
    if (ends_with(f, kMaskSuffix)) mask_names.insert(f.substr(0, f.size() - kMaskSuffix.size()));
  }
  if (rgb_names != mask_names) {
    throw FormatError("patch library '" + dir.string() + "' has unpaired rgb/mask files");
  }
  std::vector<Patch> out;
  for (const std::string& name : rgb_names) {
    Patch p;
    p.name = name;
    p.rgb = decode_rgb_png(detail::read_binary_file(dir / (name + std::string(kRgbSuffix))));
    p.mask = decode_mask_png(detail::read_binary_file(dir / (name + std::string(kMaskSuffix))));
    require_same_dims(p.rgb, p.mask, ("patch '" + name + "'").c_str());
    out.push_back(std::move(p));
  }
  return out;
}

Frame baseline_augment(const Frame& frame, std::size_t view, BaselineMode mode,
                       const std::vector<Patch>& library,
                       const std::vector<Mask>& protected_masks, std::uint64_t seed,
                       const BaselineOptions& options) {
  if (view >= frame.views.size()) throw InvariantError("view index out of range");
  if (mode != BaselineMode::kSpatial && library.empty()) {
    throw InvariantError(std::string("patch library is empty for mode ") + to_string(mode));
  }
  Frame out = frame;
  Image& rgb = out.views[view].rgb;
  const int w = rgb.width();
  const int h = rgb.height();
  Mask keep(w, h);
  for (const Mask& m : protected_masks) {
    require_same_dims(rgb, m, "protected mask");
    keep = mask_union(keep, m);
  }
  SeededRng rng(seed);

  switch (mode) {
    case BaselineMode::kCopyPaste:
      for (int i = 0; i < options.paste_count; ++i) {
        const Patch& p = pick(rng, library);
        const auto [x, y] = random_offset(rng, p, w, h);
        paste(p, x, y, rgb);
      }
      break;
    case BaselineMode::kRandomBackground: {
      const Image& src = pick(rng, library).rgb;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (keep.test(x, y)) continue;
          // Nearest-neighbour resize of the library image to the frame.
          const int sx = static_cast<int>(static_cast<std::int64_t>(x) * src.width() / w);
          const int sy = static_cast<int>(static_cast<std::int64_t>(y) * src.height() / h);
          rgb.set(x, y, src.at(sx, sy));
        }
      }
      break;
    }
    case BaselineMode::kRandomDistractors: {
      std::vector<Rect> taken;
      for (const Mask& m : protected_masks) {
        if (auto b = m.bbox()) taken.push_back(*b);
      }
      for (int i = 0; i < options.distractor_count; ++i) {
        for (int attempt = 0; attempt < options.retries; ++attempt) {
          const Patch& p = pick(rng, library);
          const auto [x, y] = random_offset(rng, p, w, h);
          auto pb = p.mask.bbox();
          if (!pb) break;
          Rect r{std::max(0, pb->x0 + x), std::max(0, pb->y0 + y), std::min(w - 1, pb->x1 + x),
                 std::min(h - 1, pb->y1 + y)};
          if (!r.valid()) continue;
          if (std::any_of(taken.begin(), taken.end(),
                          [&](const Rect& t) { return bboxes_overlap(r, t); })) {
            continue;
          }
          paste(p, x, y, rgb);
          taken.push_back(r);
          break;
        }
      }
      break;
    }
    case BaselineMode::kSpatial:
      if (protected_masks.empty()) throw InvariantError("spatial baseline needs the object mask");
      rgb = spatial_jitter(rgb, protected_masks.front(), rng, options);
      break;
  }
  return out;
}

}  // namespace augforge
