#include <gtest/gtest.h>

#include "affcut/cascade.hpp"
#include "affcut/error.hpp"
#include "affcut/synth.hpp"
#include "fixtures.hpp"

namespace affcut {
namespace {

const std::vector<ClassKind> kKinds{ClassKind::kBackground, ClassKind::kInstance};
const std::vector<std::size_t> kLabelClass{0, 1, 1, 1};
const std::vector<std::vector<double>> kCenters{{0.0, 0.0}, {3.0, 0.0}, {0.0, 3.0}, {3.0, 3.0}};

// One instance cut by a horizontal background strip, drawn at every scale.
LabelMap occluded_instance(std::size_t scale) {
  const std::size_t n = 64 / scale;
  LabelMap labels({n, n}, kBackground);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t fy = y * scale;
      const std::size_t fx = x * scale;
      const bool body = fy >= 8 && fy < 56 && fx >= 16 && fx < 48;
      const bool strip = fy >= 24 && fy < 32;
      if (body && !strip) labels.at(y, x) = 1;
    }
  }
  return labels;
}

AffinityPyramid occlusion_pyramid() {
  AffinityPyramid p;
  p.class_kinds = kKinds;
  for (std::size_t s : {1, 2, 4, 8}) p.levels.push_back(testing::ideal_level(occluded_instance(s), kLabelClass, 2, kCenters));
  return p;
}

TEST(UpsampleLabels, UniformMapHasNoUnlabelled) {
  const LabelMap out = upsample_labels(LabelMap({2, 3}, 5), {4, 6});
  EXPECT_EQ(out, LabelMap({4, 6}, 5));
}

TEST(UpsampleLabels, TransitionBecomesUnlabelled) {
  const LabelMap in({2, 2}, {1, 2, 1, 2});
  const Label u = kUnlabeled;
  const LabelMap expected({4, 4}, {1, u, u, 2, 1, u, u, 2, 1, u, u, 2, 1, u, u, 2});
  EXPECT_EQ(upsample_labels(in, {4, 4}), expected);
}

TEST(UpsampleLabels, BlobLosesItsRing) {
  LabelMap in({3, 3}, kBackground);
  in.at(1, 1) = 1;
  const LabelMap out = upsample_labels(in, {6, 6});
  EXPECT_EQ(out.count(1), 0u);
  EXPECT_EQ(out.count(kUnlabeled), 12u);
  EXPECT_EQ(out.at(0, 0), kBackground);
}

TEST(UpsampleLabels, OddTargetsAndErrors) {
  EXPECT_EQ(upsample_labels(LabelMap({2, 2}, 1), {3, 4}).shape(), (GridShape{3, 4}));
  EXPECT_THROW(upsample_labels(LabelMap({2, 2}, 1), {5, 4}), InputError);
}

TEST(ParticipationMask, ArgmaxAndProbabilityModes) {
  PyramidLevel level;
  level.affinity = AffinityMap({1, 3});
  level.semantic = SemanticMap({1, 3}, 2, {0.9f, 0.4f, 0.55f, 0.1f, 0.6f, 0.45f});
  level.embedding = EmbeddingMap({1, 3}, 1);
  CascadeConfig config;
  EXPECT_EQ(participation_mask(level, kKinds, config), (std::vector<std::uint8_t>{0, 1, 0}));
  config.background_mode = BackgroundMode::kProbability;
  config.background_threshold = 0.4;
  EXPECT_EQ(participation_mask(level, kKinds, config), (std::vector<std::uint8_t>{0, 1, 1}));
}

TEST(Cascade, PositionAwareMergingJoinsOccludedHalves) {
  const AffinityPyramid p = occlusion_pyramid();
  ASSERT_NO_THROW(p.validate());
  const CascadeResult full = cascade_gaec(p);
  EXPECT_EQ(full.labels.max_label(), 1);
  EXPECT_EQ(full.labels, occluded_instance(1));

  CascadeConfig plain;
  plain.use_pa_gaec = false;
  const CascadeResult split = cascade_gaec(p, plain);
  EXPECT_EQ(split.labels.max_label(), 2);
  EXPECT_EQ(connected_components(split.labels), connected_components(full.labels));
}

TEST(Cascade, EmptySceneHasNoSegments) {
  AffinityPyramid p;
  p.class_kinds = kKinds;
  for (std::size_t s : {1, 2, 4}) {
    const LabelMap bg({32 / s, 32 / s}, kBackground);
    p.levels.push_back(testing::ideal_level(bg, kLabelClass, 2, kCenters));
  }
  const CascadeResult r = cascade_gaec(p);
  EXPECT_TRUE(r.segments.empty());
  EXPECT_EQ(r.labels.count(kBackground), 32u * 32u);
  EXPECT_TRUE(render_instances(r.labels, r.segments, kKinds, {128, 128}).empty());
}

TEST(Cascade, ReportsOneEntryPerLevel) {
  const CascadeResult r = cascade_gaec(occlusion_pyramid());
  ASSERT_EQ(r.levels.size(), 4u);
  EXPECT_EQ(r.levels.front().level, 4u);
  EXPECT_EQ(r.levels.back().level, 1u);
  for (const auto& l : r.levels) {
    EXPECT_EQ(l.vertices - l.gaec_contractions, l.segments_after_gaec);
    EXPECT_LE(l.segments_after_pa, l.segments_after_gaec);
  }
}

TEST(Cascade, GasPathMatchesOnNoiseFreeFixture) {
  CascadeConfig config;
  config.use_gas = true;
  const CascadeResult r = cascade_gaec(occlusion_pyramid(), config);
  EXPECT_TRUE(r.levels.back().used_gas);
  EXPECT_EQ(r.labels, occluded_instance(1));
}

TEST(Cascade, RecoversNoiseFreeSyntheticScenes) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SceneSpec spec;
    spec.shape = {256, 256};
    spec.levels = 4;
    spec.seed = seed;
    spec.occluder_probability = 0.7;
    const SyntheticScene scene = generate_scene(spec);
    for (bool use_gas : {false, true}) {
      CascadeConfig config;
      config.use_gas = use_gas;
      const CascadeResult r = cascade_gaec(scene.pyramid, config);
      EXPECT_EQ(r.labels, canonicalize(scene.level_truth.front())) << "seed " << seed << " gas " << use_gas;
    }
  }
}

TEST(CascadeProperty, NoPaOnlySplitsOnSyntheticScenes) {
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    SceneSpec spec;
    spec.shape = {256, 256};
    spec.seed = seed;
    spec.occluder_probability = 1.0;
    const SyntheticScene scene = generate_scene(spec);
    const CascadeResult full = cascade_gaec(scene.pyramid);
    CascadeConfig plain;
    plain.use_pa_gaec = false;
    const CascadeResult split = cascade_gaec(scene.pyramid, plain);
    // Every split region lies inside one full-pipeline region.
    std::vector<Label> owner(static_cast<std::size_t>(split.labels.max_label()) + 1, kUnlabeled);
    for (std::size_t p = 0; p < split.labels.shape().size(); ++p) {
      const Label s = split.labels[p];
      ASSERT_EQ(is_instance(s), is_instance(full.labels[p]));
      if (!is_instance(s)) continue;
      Label& o = owner[static_cast<std::size_t>(s)];
      if (o == kUnlabeled) o = full.labels[p];
      ASSERT_EQ(o, full.labels[p]);
    }
    EXPECT_GE(split.labels.max_label(), full.labels.max_label());
  }
}

TEST(Cascade, DeterministicForIdenticalInputs) {
  SceneSpec spec = moderate_noise_spec({256, 256}, 4);
  const SyntheticScene scene = generate_scene(spec);
  for (bool use_gas : {false, true}) {
    CascadeConfig config;
    config.use_gas = use_gas;
    config.seed = 9;
    EXPECT_EQ(cascade_gaec(scene.pyramid, config).labels, cascade_gaec(scene.pyramid, config).labels);
  }
}

TEST(RenderInstances, ScoreIsBestInstanceClassMean) {
  LabelMap labels({2, 2}, {1, 1, 1, 2});
  SegmentRecord a;
  a.id = 1;
  a.stats = testing::make_segment(3, {0, 0, 1, 1}, {0.1, 0.9}, {0.0});
  SegmentRecord b;
  b.id = 2;
  b.stats = testing::make_segment(1, {1, 1, 1, 1}, {0.0, 1.0}, {0.0});
  RenderOptions options;
  options.min_pixels = 2;
  const auto out = render_instances(labels, {a, b}, kKinds, {8, 8}, options);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].class_id, 1u);
  EXPECT_NEAR(out[0].score, 0.9, 1e-12);
  EXPECT_EQ(out[0].mask.area(), 48u);
  EXPECT_EQ(out[0].level_pixels, 3u);
  EXPECT_THROW(render_instances(labels, {a}, kKinds, {16, 8}), InputError);

  const LabelMap image = instance_label_image(out, {8, 8});
  EXPECT_EQ(image.count(1), 48u);
  EXPECT_EQ(image.count(kBackground), 16u);
}

TEST(CollectSegments, SumsPerLabel) {
  const PyramidLevel level = testing::ideal_level(occluded_instance(8), kLabelClass, 2, kCenters);
  const auto records = collect_segments(occluded_instance(8), level);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].id, 1);
  EXPECT_EQ(records[0].stats.pixel_count, 20u);
  EXPECT_DOUBLE_EQ(records[0].stats.semantic_sum[1], 20.0);
}

}  // namespace
}  // namespace affcut
