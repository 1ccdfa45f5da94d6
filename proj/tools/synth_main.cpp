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

// augforge-synth: writes small procedural datasets for trying the pipeline.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "augforge/config.hpp"
#include "augforge/error.hpp"
#include "augforge/seeding.hpp"
#include "synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"augforge-synth: procedural demo datasets"};
  app.require_subcommand(1);

  std::string output;
  int count = 10;
  int width = 128;
  int height = 96;
  int frames = 2;
  std::uint64_t seed = 1;

  CLI::App* tabletop = app.add_subcommand("tabletop", "Annotated pick-and-place observations");
  tabletop->add_option("--output", output)->required();
  tabletop->add_option("--episodes", count);
  tabletop->add_option("--width", width);
  tabletop->add_option("--height", height);
  tabletop->add_option("--frames", frames);
  tabletop->add_option("--seed", seed);

  CLI::App* video = app.add_subcommand("video", "Trajectories of a gantry arm pushing a block");
  video->add_option("--output", output)->required();
  video->add_option("--trajectories", count);
  int video_frames = 10;
  video->add_option("--frames", video_frames);

  CLI::App* patches = app.add_subcommand("patches", "Patch library for the baseline augmenters");
  patches->add_option("--output", output)->required();
  patches->add_option("--count", count);
  patches->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*tabletop) {
      augforge::synth::write_tabletop_dataset(output, count, width, height, frames, seed);
      // A config whose workspace matches the generated table.
      augforge::PipelineConfig config;
      config.workspace = augforge::synth::tabletop_workspace();
      config.num_augmentations = 10;
      std::ofstream(std::filesystem::path(output) / "config.json") << augforge::config_to_json(config);
    } else if (*video) {
      std::vector<augforge::Episode> episodes;
      for (int i = 0; i < count; ++i) {
        augforge::synth::VideoSpec spec;
        spec.frames = video_frames;
        spec.start_y = -0.1 + 0.2 * (count > 1 ? static_cast<double>(i) / (count - 1) : 0.5);
        char id[32];
        std::snprintf(id, sizeof id, "traj%03d", i);
        episodes.push_back(augforge::synth::make_video_scene(id, spec).episode);
      }
      augforge::synth::write_dataset(output, "gantry", episodes, {augforge::synth::slider_chain()});
    } else if (*patches) {
      augforge::synth::write_patch_library(output, count, seed);
    }
  } catch (const augforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "wrote " << output << "\n";
  return 0;
}
