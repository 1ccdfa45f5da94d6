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

#include <map>

#include <gtest/gtest.h>

#include "augforge/error.hpp"
#include "augforge/seeding.hpp"

namespace augforge {
namespace {

TEST(SamplePrompt, SingleOutcomeGrammar) {
  PromptGrammar g;
  g.colors = {"red"};
  g.materials = {"glass"};
  EXPECT_EQ(sample_prompt(g, "bowl", 12345), "a red glass bowl");
}

TEST(SamplePrompt, UsesSplitSeedModuloRule) {
  const PromptGrammar g;
  const std::uint64_t seed = 987654321;
  const std::string want = "a " + g.colors[split_seed(seed, "color") % 3] + " " +
                           g.materials[split_seed(seed, "material") % 3] + " cup";
  EXPECT_EQ(sample_prompt(g, "cup", seed), want);
  EXPECT_EQ(sample_prompt(g, "cup", seed), sample_prompt(g, "cup", seed));
}

TEST(SamplePrompt, NineOutcomesUniformWithinTwoPercent) {
  const PromptGrammar g;
  std::map<std::string, int> counts;
  constexpr int kSeeds = 100000;
  for (std::uint64_t s = 0; s < kSeeds; ++s) ++counts[sample_prompt(g, "mug", s * 0x9e3779b97f4a7c15ULL)];
  ASSERT_EQ(counts.size(), 9u);
  double chi2 = 0.0;
  for (const auto& [prompt, n] : counts) {
    EXPECT_NEAR(static_cast<double>(n) / kSeeds, 1.0 / 9.0, 0.02) << prompt;
    const double expected = kSeeds / 9.0;
    chi2 += (n - expected) * (n - expected) / expected;
  }
  // 8 degrees of freedom, p = 0.001.
  EXPECT_LT(chi2, 26.12);
}

TEST(SamplePrompt, CustomTemplate) {
  PromptGrammar g;
  g.colors = {"green"};
  g.materials = {"steel"};
  g.template_text = "{noun} made of {material}, painted {color}";
  EXPECT_EQ(sample_prompt(g, "spoon", 1), "spoon made of steel, painted green");
}

TEST(PromptGrammar, Validation) {
  PromptGrammar g;
  EXPECT_NO_THROW(g.validate());
  g.template_text = "a {color} thing";
  EXPECT_THROW(g.validate(), InvariantError);
  g = PromptGrammar{};
  g.colors.clear();
  EXPECT_THROW(g.validate(), InvariantError);
}

TEST(Articles, StripAndAdd) {
  EXPECT_EQ(strip_article("a box"), "box");
  EXPECT_EQ(strip_article("The apple"), "apple");
  EXPECT_EQ(strip_article("an egg"), "egg");
  EXPECT_EQ(strip_article("apple"), "apple");
  EXPECT_EQ(strip_article("another cup"), "another cup");
  EXPECT_EQ(with_article("plate"), "a plate");
  EXPECT_EQ(with_article("apple"), "an apple");
  EXPECT_EQ(with_article("orange mug"), "an orange mug");
}

TEST(RewriteLanguage, ExampleFromPickPlaceTask) {
  const RewriteResult r = rewrite_language("Put the apple in a box", "a box", "a plate");
  EXPECT_EQ(r.text, "Put the apple in a plate");
  EXPECT_FALSE(r.warning);
}

TEST(RewriteLanguage, IdentityWhenLabelsEqual) {
  const RewriteResult r = rewrite_language("Put the apple in a box", "a box", "a box");
  EXPECT_EQ(r.text, "Put the apple in a box");
  EXPECT_FALSE(r.warning);
}

TEST(RewriteLanguage, MissingLabelWarns) {
  const RewriteResult r = rewrite_language("Put the apple in a box", "a bowl", "a plate");
  EXPECT_EQ(r.text, "Put the apple in a box");
  ASSERT_TRUE(r.warning);
}

TEST(RewriteLanguage, WholeWordCaseInsensitiveFirstOnly) {
  EXPECT_EQ(rewrite_language("Pick the CUP, then the cup", "the cup", "the mug").text,
            "Pick the mug, then the cup");
  // "cupboard" is not the word "cup".
  EXPECT_EQ(rewrite_language("open the cupboard near the cup", "cup", "mug").text,
            "open the cupboard near the mug");
  EXPECT_TRUE(rewrite_language("teacup", "cup", "mug").warning.has_value());
}

TEST(RewriteLanguage, EmptyLabelsRejected) {
  EXPECT_THROW(rewrite_language("x", "", "y"), InvariantError);
  EXPECT_THROW(rewrite_language("x", "x", ""), InvariantError);
}

TEST(RewriteLanguage, TemplatedCases) {
  const std::vector<std::string> objects{"the apple", "a banana", "the red block", "a sponge",
                                         "the toy car"};
  const std::vector<std::string> holders{"a box", "the bowl", "a plate", "the basket", "a tray"};
  const std::vector<std::string> replacements{"a pan", "the bin", "a crate", "a mug", "the cup"};
  int checked = 0;
  for (const auto& o : objects) {
    for (std::size_t i = 0; i < holders.size(); ++i) {
      const std::string task = "Put " + o + " in " + holders[i];
      const auto r = rewrite_language(task, holders[i], replacements[i]);
      EXPECT_EQ(r.text, "Put " + o + " in " + replacements[i]);
      const auto r2 = rewrite_language(task, o, "the pear");
      EXPECT_EQ(r2.text, "Put the pear in " + holders[i]);
      checked += 2;
    }
  }
  EXPECT_EQ(checked, 50);
}

}  // namespace
}  // namespace augforge
