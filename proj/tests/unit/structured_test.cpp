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

#include "augforge/structured.hpp"

#include <algorithm>
#include <array>

#include <gtest/gtest.h>

#include "augforge/error.hpp"
#include "augforge/raster.hpp"
#include "synthetic.hpp"

namespace augforge {
namespace {

StructuredConfig tabletop_config() {
  StructuredConfig c;
  c.workspace = synth::tabletop_workspace();
  return c;
}

ComponentProbabilities all(double p) {
  return {p, p, p, p, p, p};
}

// Pixels where any byte of the two views differs.
Mask rgb_diff(const Image& a, const Image& b) {
  Mask m(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) m.set(x, y, !(a.at(x, y) == b.at(x, y)));
  }
  return m;
}

Mask depth_diff(const DepthMap& a, const DepthMap& b) {
  Mask m(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const float p = a.at(x, y);
      const float q = b.at(x, y);
      m.set(x, y, std::memcmp(&p, &q, sizeof p) != 0);
    }
  }
  return m;
}

bool subset(const Mask& a, const Mask& b) { return mask_difference(a, b).empty(); }

void expect_payload_identical(const Episode& a, const Episode& b) {
  ASSERT_EQ(a.frames.size(), b.frames.size());
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    EXPECT_EQ(a.frames[f].action, b.frames[f].action);
    EXPECT_EQ(a.frames[f].joints, b.frames[f].joints);
    EXPECT_EQ(a.frames[f].gripper, b.frames[f].gripper);
  }
}

TEST(Components, NamesRoundTrip) {
  for (Component c : kAllComponents) EXPECT_EQ(component_from_string(to_string(c)), c);
  EXPECT_FALSE(component_from_string("lighting").has_value());
}

TEST(Plan, AllProbabilitiesOneSelectsEverything) {
  StructuredConfig c = tabletop_config();
  c.probabilities = all(1.0);
  const MeshCatalog catalog = synth::make_catalog();
  const Episode e = synth::make_tabletop_episode("ep", 1, 64, 48, 1);
  const AugmentationPlan p = plan_augmentation(c, catalog, e, 0, 42);
  EXPECT_EQ(p.components.size(), 6u);
  ASSERT_NE(p.replacement_object, nullptr);
  ASSERT_NE(p.replacement_receptacle, nullptr);
  EXPECT_TRUE(p.replacement_object->has_role(RoleTag::kObject));
  EXPECT_TRUE(p.replacement_receptacle->has_role(RoleTag::kReceptacle));
  EXPECT_GE(p.distractor_count, 1);
  EXPECT_LE(p.distractor_count, c.max_distractors);
  EXPECT_NE(p.object_prompt.find(p.replacement_object->prompt_noun), std::string::npos);
  EXPECT_NE(p.background_prompt.find("tabletop"), std::string::npos);
}

TEST(Plan, AllProbabilitiesZeroIsUnreachable) {
  StructuredConfig c = tabletop_config();
  c.probabilities = all(0.0);
  const Episode e = synth::make_tabletop_episode("ep", 1, 64, 48, 1);
  try {
    plan_augmentation(c, synth::make_catalog(), e, 0, 42);
    FAIL() << "expected InvariantError";
  } catch (const InvariantError& err) {
    EXPECT_NE(std::string(err.what()).find("empty plan unreachable"), std::string::npos);
  }
}

TEST(Plan, InclusionFrequencyNearConfiguredProbability) {
  const StructuredConfig c = tabletop_config();
  const MeshCatalog catalog = synth::make_catalog();
  const Episode e = synth::make_tabletop_episode("ep", 2, 64, 48, 1);
  std::array<int, 6> hits{};
  constexpr int kPlans = 10000;
  for (int i = 0; i < kPlans; ++i) {
    const AugmentationPlan p = plan_augmentation(c, catalog, e, static_cast<std::uint64_t>(i), 7);
    ASSERT_FALSE(p.components.empty());
    for (std::size_t k = 0; k < 6; ++k) hits[k] += p.has(kAllComponents[k]);
  }
  for (std::size_t k = 0; k < 6; ++k) {
    EXPECT_NEAR(hits[k] / static_cast<double>(kPlans), 0.5, 0.02) << to_string(kAllComponents[k]);
  }
}

TEST(Plan, DeterministicAndComponentsCanonical) {
  const StructuredConfig c = tabletop_config();
  const MeshCatalog catalog = synth::make_catalog();
  const Episode e = synth::make_tabletop_episode("ep", 3, 64, 48, 1);
  for (std::uint64_t a = 0; a < 50; ++a) {
    const AugmentationPlan p = plan_augmentation(c, catalog, e, a, 99);
    const AugmentationPlan q = plan_augmentation(c, catalog, e, a, 99);
    EXPECT_EQ(p.components, q.components);
    EXPECT_EQ(p.seeds, q.seeds);
    EXPECT_EQ(p.object_prompt, q.object_prompt);
    EXPECT_TRUE(std::is_sorted(p.components.begin(), p.components.end()));
    if (p.has(Component::kObjectShape)) {
      EXPECT_NE(p.replacement_object, nullptr);
    }
    EXPECT_LE(p.distractor_count, c.max_distractors);
  }
}

TEST(Plan, ShapeNeverDrawnWithoutCatalogAssets) {
  StructuredConfig c = tabletop_config();
  c.probabilities = all(1.0);
  const Episode e = synth::make_tabletop_episode("ep", 1, 64, 48, 1);
  const AugmentationPlan p = plan_augmentation(c, MeshCatalog{}, e, 0, 1);
  EXPECT_FALSE(p.has(Component::kObjectShape));
  EXPECT_FALSE(p.has(Component::kReceptacleShape));
  EXPECT_FALSE(p.has(Component::kDistractors));
  EXPECT_TRUE(p.has(Component::kObjectTexture));
}

TEST(Plan, MissingMasksRejected) {
  Episode e = synth::make_tabletop_episode("ep", 1, 32, 32, 1);
  e.object_mask.reset();
  EXPECT_THROW(plan_augmentation(tabletop_config(), synth::make_catalog(), e, 0, 1), InvariantError);
}

TEST(InCategory, DepthUntouchedAndEditsStayInMask) {
  MockBackend mock;
  const Episode e = synth::make_tabletop_episode("ep", 4, 80, 60, 1);
  const Frame& f = e.frames[0];
  const Frame out = augment_in_category(f, 0, *e.object_mask, "a red glass mug", 5, mock);
  EXPECT_EQ(*out.views[0].depth, *f.views[0].depth);
  EXPECT_TRUE(subset(rgb_diff(f.views[0].rgb, out.views[0].rgb), *e.object_mask));
  EXPECT_EQ(out.action, f.action);
  const Frame other = augment_in_category(f, 0, *e.object_mask, "a yellow wood mug", 5, mock);
  const Mask d = rgb_diff(out.views[0].rgb, other.views[0].rgb);
  EXPECT_FALSE(d.empty());
  EXPECT_TRUE(subset(d, *e.object_mask));
  EXPECT_THROW(augment_in_category(f, 0, Mask(80, 60), "x", 1, mock), InvariantError);
}

TEST(Backfill, AveragesNearestValidNeighbours) {
  DepthMap d(5, 3, 1.0f);
  d.set(0, 1, 2.0f);
  d.set(4, 1, 4.0f);
  Mask hole(5, 3);
  for (int x = 1; x < 4; ++x) hole.set(x, 1);
  const DepthMap out = backfill_depth(d, hole);
  // Left 2, right 4, up 1, down 1.
  EXPECT_FLOAT_EQ(out.at(2, 1), 2.0f);
  EXPECT_EQ(out.at(0, 1), 2.0f);
  EXPECT_THROW(backfill_depth(DepthMap(3, 3), Mask(3, 3, true)), InvariantError);
}

// Horizontal camera looking along +y at a floor and a back wall.
struct SlabScene {
  CameraModel camera;
  Frame frame;
  Mask old_mask;
};

SlabScene make_slab_scene() {
  SlabScene s;
  s.camera = CameraModel::look_at(90, 90, 49.5, 39.5, Vec3(0, -1.0, 0.1), Vec3(0, 0, 0.1));
  std::vector<synth::SceneObject> scene{
      {synth::make_table_mesh(3.0), {120, 120, 120}},
      {make_box_mesh(Vec3(3, 0.01, 3)).transformed(RigidTransform::from_translation(Vec3(0, 1.0, 0))),
       {60, 60, 90}},
      {make_box_mesh(Vec3(0.06, 0.06, 0.06))
           .transformed(RigidTransform::from_translation(Vec3(0, 0, 0.06))),
       {200, 30, 30}},
  };
  const auto r = synth::render_scene(scene, s.camera, 100, 80);
  s.frame.views.push_back({"cam", r.rgb, r.depth});
  s.frame.action = {1, 2, 3};
  s.old_mask = r.visible[2];
  return s;
}

TEST(CrossCategory, SlabDepthEqualsRasterizerOutput) {
  MockBackend mock;
  const SlabScene s = make_slab_scene();
  const MeshAsset slab = synth::to_asset(
      make_box_mesh(Vec3(0.05, 0.002, 0.08)).transformed(RigidTransform::from_translation(Vec3(0, 0, 0.08))),
      "slab.obj", "slab", "slab", {RoleTag::kObject});
  const CrossCategoryResult r =
      augment_cross_category(s.frame, 0, s.old_mask, slab, "a red wood slab", 9, s.camera, mock);
  MeshAsset placed = slab;
  for (Vec3& v : placed.vertices) v = r.scale * v;
  const RenderResult want = render_mesh_depth(placed, r.pose, s.camera, 100, 80);
  const DepthMap& got = *r.frame.views[0].depth;
  ASSERT_FALSE(r.new_mask.empty());
  EXPECT_EQ(r.new_mask, want.mask);
  std::vector<float> inside;
  for (int y = 0; y < 80; ++y) {
    for (int x = 0; x < 100; ++x) {
      if (!r.new_mask.test(x, y)) continue;
      EXPECT_EQ(got.at(x, y), want.depth.at(x, y));
      inside.push_back(got.at(x, y));
    }
  }
  // The slab faces the camera: almost all of it sits at one depth.
  std::sort(inside.begin(), inside.end());
  const float median = inside[inside.size() / 2];
  const auto front = std::count_if(inside.begin(), inside.end(),
                                   [&](float v) { return std::abs(v - median) < 1e-5f; });
  EXPECT_GT(static_cast<std::size_t>(front), inside.size() * 9 / 10);
  EXPECT_EQ(r.frame.action, s.frame.action);
}

TEST(CrossCategory, OutsideEditRegionBitIdentical) {
  MockBackend mock;
  const MeshCatalog catalog = synth::make_catalog();
  const auto objects = catalog.with_role(RoleTag::kObject);
  for (int i = 0; i < 10; ++i) {
    const Episode e = synth::make_tabletop_episode("ep", 100 + i, 120, 90, 1);
    const Frame& f = e.frames[0];
    CrossCategoryOptions opt;
    opt.keep_out = *e.receptacle_mask;
    const CrossCategoryResult r = augment_cross_category(
        f, 0, *e.object_mask, *objects[i % objects.size()], "a red glass thing",
        static_cast<std::uint64_t>(i), e.cameras[0].model, mock, opt);
    const Mask union_mask = mask_union(*e.object_mask, r.new_mask);
    EXPECT_TRUE(subset(depth_diff(*f.views[0].depth, *r.frame.views[0].depth), union_mask));
    EXPECT_TRUE(subset(rgb_diff(f.views[0].rgb, r.frame.views[0].rgb), r.edit_region));
    EXPECT_TRUE(subset(mask_difference(union_mask, *e.receptacle_mask), r.edit_region));
    EXPECT_FALSE(masks_intersect(r.new_mask, *e.receptacle_mask));
    EXPECT_FALSE(masks_intersect(r.edit_region, *e.receptacle_mask));
  }
}

TEST(CrossCategory, FootprintWidthWithinQuarterOfOldWidth) {
  MockBackend mock;
  const MeshCatalog catalog = synth::make_catalog();
  const auto objects = catalog.with_role(RoleTag::kObject);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const Episode e = synth::make_tabletop_episode("ep", 500 + i, 160, 120, 1);
    const CrossCategoryResult r = augment_cross_category(
        e.frames[0], 0, *e.object_mask, *objects[i % objects.size()], "a thing",
        static_cast<std::uint64_t>(i) * 31, e.cameras[0].model, mock);
    const auto nb = r.new_mask.bbox();
    const auto ob = e.object_mask->bbox();
    ASSERT_TRUE(nb && ob);
    if (nb->x0 == 0 || nb->x1 == 159) continue;  // clipped by the frame border
    const double ratio = static_cast<double>(nb->width()) / ob->width();
    EXPECT_GE(ratio, 0.75) << i;
    EXPECT_LE(ratio, 1.25) << i;
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(CrossCategory, EmptyOldMaskRejected) {
  MockBackend mock;
  const SlabScene s = make_slab_scene();
  const MeshCatalog catalog = synth::make_catalog();
  EXPECT_THROW(augment_cross_category(s.frame, 0, Mask(100, 80), catalog.assets[0], "x", 1, s.camera,
                                      mock),
               InvariantError);
}

DistractorOptions distractor_options() {
  DistractorOptions o;
  o.workspace = synth::tabletop_workspace();
  return o;
}

TEST(Distractors, FullyProtectedImagePlacesNothing) {
  MockBackend mock;
  const Episode e = synth::make_tabletop_episode("ep", 6, 64, 48, 1);
  const MeshCatalog catalog = synth::make_catalog();
  const DistractorResult r =
      place_distractors(e.frames[0], 0, {Mask(64, 48, true)}, catalog.with_role(RoleTag::kDistractor), 3,
                        1, e.cameras[0].model, mock, distractor_options());
  EXPECT_TRUE(r.placed.empty());
  EXPECT_EQ(r.attempts, 60);
  EXPECT_EQ(r.frame, e.frames[0]);
}

TEST(Distractors, EmptyProtectedSetPlacesOne) {
  MockBackend mock;
  const Episode e = synth::make_tabletop_episode("ep", 6, 96, 72, 1);
  const MeshCatalog catalog = synth::make_catalog();
  const DistractorResult r = place_distractors(e.frames[0], 0, {}, catalog.with_role(RoleTag::kDistractor),
                                               1, 11, e.cameras[0].model, mock, distractor_options());
  ASSERT_EQ(r.placed.size(), 1u);
  const PlacedDistractor& p = r.placed[0];
  EXPECT_FALSE(p.mask.empty());
  const DepthMap& d = *r.frame.views[0].depth;
  for (std::size_t i = 0; i < p.mask.pixel_count(); ++i) {
    if (p.mask.test_index(i)) {
      EXPECT_EQ(d.values()[i], p.depth.values()[i]);
    }
  }
  EXPECT_TRUE(subset(depth_diff(*e.frames[0].views[0].depth, d), p.mask));
  EXPECT_TRUE(subset(rgb_diff(e.frames[0].views[0].rgb, r.frame.views[0].rgb), r.edit_region));
  const Workspace ws = synth::tabletop_workspace();
  EXPECT_GE(p.position.x(), ws.x_min);
  EXPECT_LE(p.position.x(), ws.x_max);
  EXPECT_EQ(p.position.z(), ws.table_height);
}

TEST(Distractors, BruteForceBboxRecheck) {
  MockBackend mock;
  const MeshCatalog catalog = synth::make_catalog();
  const auto assets = catalog.with_role(RoleTag::kDistractor);
  int accepted = 0;
  for (int i = 0; i < 60; ++i) {
    const Episode e = synth::make_tabletop_episode("ep", 900 + i, 96, 72, 1);
    const std::vector<Mask> prot{*e.object_mask, *e.receptacle_mask};
    const DistractorResult r = place_distractors(e.frames[0], 0, prot, assets, 4,
                                                 static_cast<std::uint64_t>(i), e.cameras[0].model,
                                                 mock, distractor_options());
    std::vector<Rect> boxes;
    for (const Mask& m : prot) boxes.push_back(*m.bbox());
    for (const PlacedDistractor& p : r.placed) {
      const Rect b = *p.mask.bbox();
      for (const Rect& q : boxes) {
        const bool disjoint = b.x1 < q.x0 || q.x1 < b.x0 || b.y1 < q.y0 || q.y1 < b.y0;
        EXPECT_TRUE(disjoint);
      }
      boxes.push_back(b);
      ++accepted;
      for (const Mask& m : prot) EXPECT_FALSE(masks_intersect(r.edit_region, m));
    }
  }
  EXPECT_GT(accepted, 60);
}

TEST(Background, FullProtectionIsIdentity) {
  MockBackend mock;
  const Episode e = synth::make_tabletop_episode("ep", 7, 40, 30, 1);
  EXPECT_EQ(augment_background(e.frames[0], 0, {Mask(40, 30, true)}, "a tabletop", 1, mock),
            e.frames[0]);
}

TEST(Background, EmptyProtectionFillsWholeImage) {
  MockBackend mock;
  const Episode e = synth::make_tabletop_episode("ep", 7, 40, 30, 1);
  const Frame out = augment_background(e.frames[0], 0, {}, "a tabletop", 1, mock);
  const Rgb base = mock_fill_color("a tabletop", 1);
  EXPECT_EQ(out.views[0].rgb.at(1, 0), base);
  EXPECT_EQ(out.views[0].depth, e.frames[0].views[0].depth);
}

TEST(Background, ProtectedPixelsUnchanged) {
  MockBackend mock;
  for (int i = 0; i < 20; ++i) {
    const Episode e = synth::make_tabletop_episode("ep", 70 + i, 64, 48, 1);
    const std::vector<Mask> prot{*e.object_mask, *e.receptacle_mask};
    const Frame out = augment_background(e.frames[0], 0, prot, "a marble tabletop",
                                         static_cast<std::uint64_t>(i), mock);
    const Mask changed = rgb_diff(e.frames[0].views[0].rgb, out.views[0].rgb);
    for (const Mask& m : prot) EXPECT_FALSE(masks_intersect(changed, m));
  }
}

TEST(Driver, SemanticInvarianceAndScopedEdits) {
  MockBackend mock;
  const StructuredConfig c = tabletop_config();
  const MeshCatalog catalog = synth::make_catalog();
  for (int i = 0; i < 40; ++i) {
    const Episode e = synth::make_tabletop_episode("ep", 300 + i, 96, 72, 2);
    const AugmentationPlan plan = plan_augmentation(c, catalog, e, static_cast<std::uint64_t>(i), 5);
    const StructuredResult r = augment_structured(e, plan, c, catalog, mock);
    expect_payload_identical(e, r.episode);
    EXPECT_EQ(r.episode.id, e.id);
    EXPECT_EQ(r.episode.frames[1], e.frames[1]);
    const CameraView& a = e.frames[0].views[0];
    const CameraView& b = r.episode.frames[0].views[0];
    EXPECT_TRUE(subset(rgb_diff(a.rgb, b.rgb), r.edit_region));
    const bool geometric = plan.has(Component::kObjectShape) ||
                           plan.has(Component::kReceptacleShape) ||
                           plan.has(Component::kDistractors);
    if (!geometric) {
      EXPECT_EQ(*b.depth, *a.depth);
    }
    if (plan.has(Component::kObjectShape)) {
      EXPECT_EQ(r.episode.object_label, with_article(plan.replacement_object->prompt_noun));
      EXPECT_NE(r.episode.task_text.find(r.episode.object_label), std::string::npos);
    } else {
      EXPECT_EQ(r.episode.object_label, e.object_label);
    }
    // Deterministic given the same inputs.
    const StructuredResult again = augment_structured(e, plan, c, catalog, mock);
    EXPECT_EQ(again.episode, r.episode);
  }
}

TEST(Driver, TextureOnlyPlansKeepDepth) {
  MockBackend mock;
  StructuredConfig c = tabletop_config();
  c.probabilities = {0.5, 0.5, 0.0, 0.0, 0.5, 0.0};
  const MeshCatalog catalog = synth::make_catalog();
  for (int i = 0; i < 20; ++i) {
    const Episode e = synth::make_tabletop_episode("ep", 40 + i, 64, 48, 1);
    const AugmentationPlan plan = plan_augmentation(c, catalog, e, static_cast<std::uint64_t>(i), 3);
    const StructuredResult r = augment_structured(e, plan, c, catalog, mock);
    EXPECT_EQ(*r.episode.frames[0].views[0].depth, *e.frames[0].views[0].depth);
    EXPECT_EQ(r.episode.object_mask, e.object_mask);
  }
}

}  // namespace
}  // namespace augforge
