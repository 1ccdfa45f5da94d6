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

#ifndef AUGFORGE_PROMPT_HPP_
#define AUGFORGE_PROMPT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace augforge {

struct PromptGrammar {
  std::vector<std::string> colors{"red", "orange", "yellow"};
  std::vector<std::string> materials{"glass", "marble", "wood"};
  std::string template_text = "a {color} {material} {noun}";

  void validate() const;
};

// Fills the template with one colour and one material picked by independent
// sub-seeds of `seed` (index = sub-seed mod list length).
std::string sample_prompt(const PromptGrammar& grammar, const std::string& noun,
                          std::uint64_t seed);

// "a box" -> "box"; strips one leading English article.
std::string strip_article(const std::string& label);
// "plate" -> "a plate", "apple" -> "an apple".
std::string with_article(const std::string& noun);

struct RewriteResult {
  std::string text;
  std::optional<std::string> warning;
};

// Replaces the first whole-word, case-insensitive occurrence of `old_label`.
// When there is none the description is returned unchanged with a warning.
RewriteResult rewrite_language(const std::string& description, const std::string& old_label,
                               const std::string& new_label);

}  // namespace augforge

#endif  // AUGFORGE_PROMPT_HPP_
