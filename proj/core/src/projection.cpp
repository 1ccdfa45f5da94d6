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

#include "augforge/projection.hpp"

#include <algorithm>

#include "augforge/error.hpp"

namespace augforge {
namespace {

// Cell count along an axis; tolerant of ranges that are an exact multiple of
// the resolution up to floating-point noise.
int cells_along(double lo, double hi, double res) {
  const double n = (hi - lo) / res;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) < 1e-9 * std::max(1.0, n)) return static_cast<int>(rounded);
  return static_cast<int>(std::ceil(n));
}

}  // namespace

void Workspace::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw InvariantError("workspace ranges must be non-degenerate");
  }
  if (!(topdown_resolution > 0.0)) {
    throw InvariantError("workspace resolution must be positive");
  }
  if (!std::isfinite(table_height)) throw InvariantError("table height must be finite");
}

int Workspace::grid_width() const { return cells_along(x_min, x_max, topdown_resolution); }
int Workspace::grid_height() const { return cells_along(y_min, y_max, topdown_resolution); }

Heightmap::Heightmap(int width, int height)
    : width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(width) * height, std::numeric_limits<float>::quiet_NaN()) {
  if (width < 1 || height < 1) throw InvariantError("heightmap dimensions must be >= 1");
}

std::size_t Heightmap::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](float h) { return is_valid(h); }));
}

TopdownView project_topdown(const Image& rgb, const DepthMap& depth,
                            const CameraModel& camera, const Workspace& ws) {
  require_same_dims(rgb, depth, "project_topdown");
  camera.validate();
  ws.validate();
  const int gw = ws.grid_width();
  const int gh = ws.grid_height();
  TopdownView out{Image(gw, gh), Heightmap(gw, gh), {}};
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      const float d = depth.at(u, v);
      if (!DepthMap::is_valid(d)) continue;
      const Vec3 p = back_project(camera, u, v, d);
      if (p.x() < ws.x_min || p.x() >= ws.x_max || p.y() < ws.y_min || p.y() >= ws.y_max) {
        continue;
      }
      const int cx = std::min(gw - 1, static_cast<int>((p.x() - ws.x_min) / ws.topdown_resolution));
      const int cy = std::min(gh - 1, static_cast<int>((p.y() - ws.y_min) / ws.topdown_resolution));
      const auto h = static_cast<float>(p.z() - ws.table_height);
      const float current = out.heights.at(cx, cy);
      if (!Heightmap::is_valid(current) || h > current) {
        out.heights.set(cx, cy, h);
        out.rgb.set(cx, cy, rgb.at(u, v));
      }
    }
  }
  if (out.heights.valid_count() == 0) {
    out.warnings.push_back("no valid depth pixel projects into the workspace; top-down view is empty");
  }
  return out;
}

Vec3 topdown_pixel_to_world(GridPixel px, const Heightmap& heights, const Workspace& ws) {
  if (px.x < 0 || px.y < 0 || px.x >= heights.width() || px.y >= heights.height()) {
    throw InvariantError("top-down pixel (" + std::to_string(px.x) + ", " +
                         std::to_string(px.y) + ") is outside the grid");
  }
  const float h = heights.at(px.x, px.y);
  if (!Heightmap::is_valid(h)) {
    throw InvariantError("top-down pixel (" + std::to_string(px.x) + ", " +
                         std::to_string(px.y) + ") has no height");
  }
  return {ws.x_min + (px.x + 0.5) * ws.topdown_resolution,
          ws.y_min + (px.y + 0.5) * ws.topdown_resolution, ws.table_height + h};
}

}  // namespace augforge
