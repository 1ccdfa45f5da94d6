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

// RGB-only comparison augmenters: random copy-paste, random background,
// random pasted distractors and SE(2) jitter of the object crop.

#ifndef AUGFORGE_BASELINE_HPP_
#define AUGFORGE_BASELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "augforge/episode.hpp"
#include "augforge/image.hpp"

namespace augforge {

enum class BaselineMode { kCopyPaste, kRandomBackground, kRandomDistractors, kSpatial };
const char* to_string(BaselineMode mode);
std::optional<BaselineMode> baseline_mode_from_string(const std::string& s);

struct Patch {
  std::string name;
  Image rgb;
  Mask mask;
};

// Loads every `<name>.rgb.png` with a matching `<name>.mask.png`, sorted by
// name. Unpaired files raise FormatError.
std::vector<Patch> load_patch_library(const std::filesystem::path& dir);

struct BaselineOptions {
  int paste_count = 1;
  int distractor_count = 3;
  int retries = 20;
  double max_translation_px = 20.0;
  double max_rotation_rad = 0.5;
};

// `protected_masks` front is the object (spatial mode moves it); all of them
// are kept out of random_background and random_distractors edits.
Frame baseline_augment(const Frame& frame, std::size_t view, BaselineMode mode,
                       const std::vector<Patch>& library,
                       const std::vector<Mask>& protected_masks, std::uint64_t seed,
                       const BaselineOptions& options = {});

}  // namespace augforge

#endif  // AUGFORGE_BASELINE_HPP_
