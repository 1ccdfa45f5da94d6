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

#ifndef AUGFORGE_PROJECTION_HPP_
#define AUGFORGE_PROJECTION_HPP_

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "augforge/camera.hpp"
#include "augforge/image.hpp"

namespace augforge {

// Rectangular table region for top-down views. The grid's column index runs
// along world x and its row index along world y.
struct Workspace {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  double table_height = 0.0;
  double topdown_resolution = 0.005;

  void validate() const;
  int grid_width() const;
  int grid_height() const;
};

// Height above the table per top-down cell; NaN marks an untouched cell.
class Heightmap {
 public:
  Heightmap() = default;
  Heightmap(int width, int height);

  static bool is_valid(float h) { return !std::isnan(h); }

  int width() const { return width_; }
  int height() const { return height_; }
  float at(int x, int y) const { return cells_[static_cast<std::size_t>(y) * width_ + x]; }
  void set(int x, int y, float h) { cells_[static_cast<std::size_t>(y) * width_ + x] = h; }
  std::size_t valid_count() const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> cells_;
};

struct TopdownView {
  // Colour of the highest point per cell; untouched cells are black.
  Image rgb;
  Heightmap heights;
  std::vector<std::string> warnings;
};

// Back-projects every valid depth pixel and splats it orthographically onto
// the workspace grid; the highest point wins each cell.
TopdownView project_topdown(const Image& rgb, const DepthMap& depth,
                            const CameraModel& camera, const Workspace& ws);

struct GridPixel {
  int x = 0;
  int y = 0;
};

// Cell center in world coordinates, z = table height + cell height. Throws
// InvariantError for cells outside the grid or without a height.
Vec3 topdown_pixel_to_world(GridPixel px, const Heightmap& heights, const Workspace& ws);

}  // namespace augforge

#endif  // AUGFORGE_PROJECTION_HPP_
