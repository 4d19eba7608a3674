#include <gtest/gtest.h>

#include <cmath>

#include "affcut/error.hpp"
#include "affcut/position_aware.hpp"
#include "fixtures.hpp"

namespace affcut {
namespace {

using testing::make_segment;
using testing::Rng;

Segment box_segment(int y0, int x0, int h, int w) {
  return make_segment(static_cast<std::size_t>(h * w), {y0, x0, y0 + h - 1, x0 + w - 1}, {0.0, 1.0}, {0.0, 0.0});
}

TEST(Damping, IdenticalCentersGiveOne) {
  const Segment a = box_segment(0, 0, 10, 10);
  EXPECT_DOUBLE_EQ(damping(a, a, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(damping(a, box_segment(2, 2, 6, 6), 3.0), 1.0);
}

TEST(Damping, OneHeightApart) {
  const Segment a = box_segment(0, 0, 10, 10);
  const Segment b = box_segment(10, 0, 10, 10);
  EXPECT_NEAR(damping(a, b, 0.5), 0.70710678, 1e-8);
}

TEST(Damping, OffsetWithinHalfExtentIsCapped) {
  const Segment a = box_segment(0, 0, 10, 10);
  const Segment b = box_segment(5, 0, 10, 10);
  EXPECT_DOUBLE_EQ(damping(a, b, 0.5), 1.0);
}

TEST(DampingProperty, RangeSymmetryMonotonicityScale) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int h1 = static_cast<int>(testing::uniform_size(rng, 1, 20));
    const int w1 = static_cast<int>(testing::uniform_size(rng, 1, 20));
    const int h2 = static_cast<int>(testing::uniform_size(rng, 1, 20));
    const int w2 = static_cast<int>(testing::uniform_size(rng, 1, 20));
    const int dy = static_cast<int>(testing::uniform_size(rng, 0, 60));
    const int dx = static_cast<int>(testing::uniform_size(rng, 0, 60));
    const double beta = testing::uniform(rng, 0.0, 3.0);
    const Segment a = box_segment(0, 0, h1, w1);
    const Segment b = box_segment(dy, dx, h2, w2);
    const double d = damping(a, b, beta);
    ASSERT_GT(d, 0.0);
    ASSERT_LE(d, 1.0);
    ASSERT_DOUBLE_EQ(d, damping(b, a, beta));

    const Segment further = box_segment(dy + 3, dx, h2, w2);
    ASSERT_LE(damping(a, further, beta), d + 1e-15);

    const int s = static_cast<int>(testing::uniform_size(rng, 2, 5));
    const Segment as = box_segment(0, 0, h1 * s, w1 * s);
    const Segment bs = box_segment(dy * s, dx * s, h2 * s, w2 * s);
    ASSERT_NEAR(damping(as, bs, beta), d, 1e-12);
  }
}

TEST(Damping, BetaZeroDisablesDamping) {
  EXPECT_DOUBLE_EQ(damping(box_segment(0, 0, 2, 2), box_segment(100, 100, 2, 2), 0.0), 1.0);
}

TEST(JensenShannon, Bounds) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(jensen_shannon_divergence(p, p), 0.0);
  const std::vector<double> a{1.0, 0.0};
  const std::vector<double> b{0.0, 1.0};
  EXPECT_DOUBLE_EQ(jensen_shannon_divergence(a, b), 1.0);
  EXPECT_THROW(jensen_shannon_divergence(a, p), InputError);
}

TEST(JensenShannonProperty, SymmetricAndBounded) {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t c = testing::uniform_size(rng, 2, 6);
    std::vector<double> p(c);
    std::vector<double> q(c);
    double sp = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
      p[i] = testing::uniform(rng);
      q[i] = testing::uniform(rng);
      sp += p[i];
      sq += q[i];
    }
    for (std::size_t i = 0; i < c; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    const double d = jensen_shannon_divergence(p, q);
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, 1.0);
    ASSERT_NEAR(d, jensen_shannon_divergence(q, p), 1e-15);
    ASSERT_LT(jensen_shannon_divergence(p, p), 1e-9);
  }
}

TEST(SegmentAffinity, Examples) {
  const Segment a = make_segment(4, {0, 0, 1, 1}, {0.3, 0.7}, {1.0, 2.0});
  const SegmentAffinity same = segment_affinity(a, a);
  EXPECT_DOUBLE_EQ(same.semantic, 1.0);
  EXPECT_DOUBLE_EQ(same.embedding, 1.0);

  const Segment b = make_segment(4, {0, 0, 1, 1}, {1.0, 0.0}, {1.0, 2.0});
  const Segment c = make_segment(4, {0, 0, 1, 1}, {0.0, 1.0}, {1.0, 3.0});
  const SegmentAffinity bc = segment_affinity(b, c);
  EXPECT_DOUBLE_EQ(bc.semantic, 0.0);
  EXPECT_NEAR(bc.embedding, 0.5, 1e-12);

  EXPECT_THROW(segment_affinity(Segment{}, a), LogicError);
}

TEST(PaGaec, MergesOccludedHalves) {
  const std::vector<Segment> halves{
      make_segment(100, {0, 0, 9, 9}, {0.0, 1.0}, {0.0, 0.0}),
      make_segment(100, {10, 0, 19, 9}, {0.0, 1.0}, {0.0, 0.0}),
  };
  EXPECT_NEAR(pa_score(halves[0], halves[1], 0.5), 0.70710678, 1e-8);
  EXPECT_EQ(pa_gaec(halves), (std::vector<std::size_t>{0, 0}));
}

TEST(PaGaec, DifferentClassesNeverMerge) {
  const std::vector<Segment> s{
      make_segment(100, {0, 0, 9, 9}, {1.0, 0.0}, {0.0, 0.0}),
      make_segment(100, {0, 0, 9, 9}, {0.0, 1.0}, {0.0, 0.0}),
  };
  EXPECT_DOUBLE_EQ(pa_score(s[0], s[1], 0.5), 0.0);
  PaGaecOptions full;
  full.full_pairs = true;
  EXPECT_EQ(pa_gaec(s, full), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(pa_gaec(s), (std::vector<std::size_t>{0, 1}));
}

TEST(PaGaec, SingleSegmentAndEmptyInput) {
  const std::vector<Segment> one{box_segment(0, 0, 3, 3)};
  EXPECT_EQ(pa_gaec(one), (std::vector<std::size_t>{0}));
  EXPECT_TRUE(pa_gaec(std::vector<Segment>{}).empty());
}

TEST(PaGaec, BetaExtremes) {
  // a and b overlap in center range, c is two heights away.
  const std::vector<Segment> s{
      make_segment(100, {0, 0, 9, 9}, {0.0, 1.0}, {0.0, 0.0}),
      make_segment(100, {4, 0, 13, 9}, {0.0, 1.0}, {0.0, 0.0}),
      make_segment(100, {30, 0, 39, 9}, {0.0, 1.0}, {0.0, 0.0}),
  };
  PaGaecOptions steep;
  steep.beta = 60.0;
  steep.min_damping = 0.0;
  EXPECT_EQ(pa_gaec(s, steep), (std::vector<std::size_t>{0, 0, 1}));

  PaGaecOptions flat;
  flat.beta = 0.0;
  EXPECT_EQ(pa_gaec(s, flat), (std::vector<std::size_t>{0, 0, 0}));
}

TEST(PaGaec, PruningDropsFarPairs) {
  const std::vector<Segment> s{box_segment(0, 0, 2, 2), box_segment(0, 5000, 2, 2)};
  PaGaecOptions options;
  options.beta = 1.0;
  EXPECT_EQ(build_segment_graph(s, options).live_edge_count(), 0u);
  options.full_pairs = true;
  EXPECT_EQ(build_segment_graph(s, options).live_edge_count(), 1u);
}

}  // namespace
}  // namespace affcut
