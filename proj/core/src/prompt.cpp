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

#include "augforge/prompt.hpp"

#include <cctype>

#include "augforge/error.hpp"
#include "augforge/seeding.hpp"

namespace augforge {
namespace {

void replace_all(std::string& s, const std::string& slot, const std::string& value) {
  for (std::size_t pos = s.find(slot); pos != std::string::npos;
       pos = s.find(slot, pos + value.size())) {
    s.replace(pos, slot.size(), value);
  }
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         (static_cast<unsigned char>(c) & 0x80) != 0;
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

void PromptGrammar::validate() const {
  if (colors.empty()) throw InvariantError("prompt grammar has no colors");
  if (materials.empty()) throw InvariantError("prompt grammar has no materials");
  if (template_text.find("{noun}") == std::string::npos) {
    throw InvariantError("prompt template lacks the {noun} slot");
  }
}

std::string sample_prompt(const PromptGrammar& grammar, const std::string& noun,
                          std::uint64_t seed) {
  grammar.validate();
  const std::string& color = grammar.colors[split_seed(seed, "color") % grammar.colors.size()];
  const std::string& material =
      grammar.materials[split_seed(seed, "material") % grammar.materials.size()];
  std::string out = grammar.template_text;
  replace_all(out, "{color}", color);
  replace_all(out, "{material}", material);
  replace_all(out, "{noun}", noun);
  return out;
}

std::string strip_article(const std::string& label) {
  for (const char* article : {"a ", "an ", "the "}) {
    const std::string a(article);
    if (label.size() > a.size()) {
      bool match = true;
      for (std::size_t i = 0; i < a.size(); ++i) match = match && lower(label[i]) == a[i];
      if (match) return label.substr(a.size());
    }
  }
  return label;
}

std::string with_article(const std::string& noun) {
  if (noun.empty()) return noun;
  const char c = lower(noun.front());
  const bool vowel = c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  return (vowel ? "an " : "a ") + noun;
}

RewriteResult rewrite_language(const std::string& description, const std::string& old_label,
                               const std::string& new_label) {
  if (old_label.empty() || new_label.empty()) {
    throw InvariantError("language rewrite labels must be non-empty");
  }
  const std::size_t n = old_label.size();
  for (std::size_t pos = 0; pos + n <= description.size(); ++pos) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) {
      match = lower(description[pos + i]) == lower(old_label[i]);
    }
    if (!match) continue;
    const bool left_ok = pos == 0 || !is_word_char(description[pos - 1]);
    const bool right_ok = pos + n == description.size() || !is_word_char(description[pos + n]);
    if (!left_ok || !right_ok) continue;
    return {description.substr(0, pos) + new_label + description.substr(pos + n), std::nullopt};
  }
  return {description, "label '" + old_label + "' not found in task description '" +
                           description + "'; description left unchanged"};
}

}  // namespace augforge
