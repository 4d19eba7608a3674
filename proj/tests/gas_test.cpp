#include <gtest/gtest.h>

#include "affcut/error.hpp"
#include "affcut/gas.hpp"
#include "fixtures.hpp"

namespace affcut {
namespace {

using testing::Rng;

AffinityMap constant_affinity(GridShape shape, float value) {
  AffinityMap a(shape);
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      if (y + 1 < shape.height) a.set_vertical(y, x, value);
      if (x + 1 < shape.width) a.set_horizontal(y, x, value);
    }
  }
  return a;
}

TEST(Gas, SurroundedPixelTakesTheLabel) {
  LabelMap labels({3, 3}, 4);
  labels.at(1, 1) = kUnlabeled;
  const LabelMap out = gas(labels, constant_affinity({3, 3}, 0.9f), 0.5, 0);
  EXPECT_EQ(out, LabelMap({3, 3}, 4));
}

TEST(Gas, ArgmaxNeighbourWins) {
  const LabelMap labels({1, 3}, {1, kUnlabeled, 2});
  AffinityMap a({1, 3});
  a.set_horizontal(0, 0, 0.6f);
  a.set_horizontal(0, 1, 0.8f);
  EXPECT_EQ(gas(labels, a, 0.5, 0), LabelMap({1, 3}, {1, 2, 2}));
}

TEST(Gas, WeakNeighboursLeaveBackground) {
  const LabelMap labels({1, 3}, {1, kUnlabeled, 2});
  AffinityMap a({1, 3});
  a.set_horizontal(0, 0, 0.5f);
  a.set_horizontal(0, 1, 0.3f);
  EXPECT_EQ(gas(labels, a, 0.5, 0), LabelMap({1, 3}, {1, kBackground, 2}));
}

TEST(Gas, BackgroundNeighboursAreNotCandidates) {
  const LabelMap labels({1, 3}, {kBackground, kUnlabeled, 1});
  AffinityMap a({1, 3});
  a.set_horizontal(0, 0, 0.99f);
  a.set_horizontal(0, 1, 0.6f);
  EXPECT_EQ(gas(labels, a, 0.5, 0), LabelMap({1, 3}, {kBackground, 1, 1}));
}

TEST(Gas, RejectsShapeMismatch) {
  EXPECT_THROW(gas(LabelMap({2, 2}), AffinityMap({2, 3}), 0.5, 0), InputError);
}

TEST(GasProperty, InvariantsOnRandomInputs) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const GridShape shape{testing::uniform_size(rng, 1, 15), testing::uniform_size(rng, 1, 15)};
    const AffinityMap a = testing::random_affinity(rng, shape);
    LabelMap labels = testing::random_labels(rng, shape, 3);
    for (Label& l : labels.labels()) {
      if (testing::uniform(rng) < 0.6) l = kUnlabeled;
    }
    const LabelMap out = gas(labels, a, 0.5, trial);
    for (std::size_t p = 0; p < shape.size(); ++p) {
      ASSERT_NE(out[p], kUnlabeled);
      if (labels[p] != kUnlabeled) {
        ASSERT_EQ(out[p], labels[p]);
      }
      if (labels[p] == kUnlabeled && is_instance(out[p])) {
        // Adopted labels come from some neighbour with the same final label over a strong edge.
        const std::size_t y = p / shape.width;
        const std::size_t x = p % shape.width;
        bool supported = false;
        if (y > 0 && out.at(y - 1, x) == out[p] && a.at(Direction::kUp, y, x) > 0.5f) supported = true;
        if (y + 1 < shape.height && out.at(y + 1, x) == out[p] && a.down(y, x) > 0.5f) supported = true;
        if (x > 0 && out.at(y, x - 1) == out[p] && a.at(Direction::kLeft, y, x) > 0.5f) supported = true;
        if (x + 1 < shape.width && out.at(y, x + 1) == out[p] && a.right(y, x) > 0.5f) supported = true;
        ASSERT_TRUE(supported);
      }
    }
    ASSERT_EQ(out, gas(labels, a, 0.5, trial));
  }
}

TEST(GasProperty, SingleSourceFloodsRegardlessOfSeed) {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const GridShape shape{testing::uniform_size(rng, 2, 20), testing::uniform_size(rng, 2, 20)};
    AffinityMap a(shape);
    for (std::size_t y = 0; y < shape.height; ++y) {
      for (std::size_t x = 0; x < shape.width; ++x) {
        if (y + 1 < shape.height) a.set_vertical(y, x, static_cast<float>(testing::uniform(rng, 0.51, 1.0)));
        if (x + 1 < shape.width) a.set_horizontal(y, x, static_cast<float>(testing::uniform(rng, 0.51, 1.0)));
      }
    }
    LabelMap labels(shape, kUnlabeled);
    labels[testing::uniform_size(rng, 0, shape.size() - 1)] = 7;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      ASSERT_EQ(gas(labels, a, 0.5, seed), LabelMap(shape, 7));
    }
  }
}

}  // namespace
}  // namespace affcut
