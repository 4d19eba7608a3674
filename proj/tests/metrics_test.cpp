#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "affcut/error.hpp"
#include "affcut/metrics.hpp"
#include "affcut/rle.hpp"
#include "fixtures.hpp"

namespace affcut {
namespace {

using testing::Rng;

RleMask row_mask(GridShape shape, std::size_t start, std::size_t length) { return RleMask(shape, {{start, length}}); }

ScoredInstance prediction(RleMask mask, double score, std::size_t cls = 1) {
  ScoredInstance p;
  p.class_id = cls;
  p.score = score;
  p.mask = std::move(mask);
  return p;
}

GroundTruthInstance truth(RleMask mask, std::size_t cls = 1) { return {1, cls, std::move(mask)}; }

TEST(Rle, FromLabelsAndDense) {
  const LabelMap labels({2, 3}, {1, 1, 0, 0, 1, 1});
  const RleMask m = RleMask::from_labels(labels, 1);
  EXPECT_EQ(m.runs(), (std::vector<affcut::Run>{{0, 2}, {4, 2}}));
  EXPECT_EQ(m.area(), 4u);
  EXPECT_EQ(m.to_dense(), (std::vector<std::uint8_t>{1, 1, 0, 0, 1, 1}));
  const auto all = masks_by_label(labels);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].second, m);
}

TEST(Rle, RejectsInvalidRuns) {
  EXPECT_THROW(RleMask({2, 2}, {{3, 2}}), InputError);
  EXPECT_THROW(RleMask({2, 2}, {{0, 2}, {1, 1}}), InputError);
}

TEST(Rle, IouExamples) {
  const GridShape s{1, 10};
  EXPECT_DOUBLE_EQ(iou(row_mask(s, 0, 4), row_mask(s, 2, 4)), 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(iou(RleMask(s, {}), RleMask(s, {})), 0.0);
  EXPECT_EQ(intersection_area(row_mask(s, 0, 10), RleMask(s, {{1, 2}, {5, 3}})), 5u);
}

TEST(RleProperty, IntersectionMatchesDense) {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const GridShape shape{testing::uniform_size(rng, 1, 8), testing::uniform_size(rng, 1, 8)};
    const LabelMap a = testing::random_labels(rng, shape, 1);
    const LabelMap b = testing::random_labels(rng, shape, 1);
    std::size_t both = 0;
    for (std::size_t p = 0; p < shape.size(); ++p) both += a[p] == 1 && b[p] == 1;
    ASSERT_EQ(intersection_area(RleMask::from_labels(a, 1), RleMask::from_labels(b, 1)), both);
  }
}

TEST(AveragePrecision, IdenticalPredictionsScoreOne) {
  const GridShape s{1, 20};
  ImageEvaluation image;
  image.truth = {truth(row_mask(s, 0, 5)), truth(row_mask(s, 10, 5), 2)};
  image.predictions = {prediction(row_mask(s, 0, 5), 0.9), prediction(row_mask(s, 10, 5), 0.8, 2)};
  const ApReport r = average_precision(std::span(&image, 1));
  EXPECT_DOUBLE_EQ(r.mean_ap, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_ap50, 1.0);
  for (double v : r.mean_per_threshold) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_EQ(r.classes.size(), 2u);
}

TEST(AveragePrecision, NoPredictionsScoreZero) {
  const GridShape s{1, 20};
  ImageEvaluation image;
  image.truth = {truth(row_mask(s, 0, 5))};
  EXPECT_DOUBLE_EQ(average_precision(std::span(&image, 1)).mean_ap, 0.0);
}

TEST(AveragePrecision, IouPointSevenCountsForFourThresholds) {
  const GridShape s{1, 20};
  ImageEvaluation image;
  image.truth = {truth(row_mask(s, 0, 10))};
  image.predictions = {prediction(row_mask(s, 0, 7), 0.5)};
  ASSERT_DOUBLE_EQ(iou(image.truth[0].mask, image.predictions[0].mask), 0.7);
  const ApReport r = average_precision(std::span(&image, 1));
  EXPECT_NEAR(r.mean_ap, 0.4, 1e-12);
  for (std::size_t t = 0; t < 10; ++t) EXPECT_DOUBLE_EQ(r.mean_per_threshold[t], t < 4 ? 1.0 : 0.0) << t;
}

TEST(AveragePrecision, ClassesMustMatch) {
  const GridShape s{1, 20};
  ImageEvaluation image;
  image.truth = {truth(row_mask(s, 0, 10), 1)};
  image.predictions = {prediction(row_mask(s, 0, 10), 0.5, 2)};
  const ApReport r = average_precision(std::span(&image, 1));
  EXPECT_DOUBLE_EQ(r.mean_ap, 0.0);
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].prediction_count, 0u);
}

TEST(AveragePrecision, RejectsResolutionMismatch) {
  ImageEvaluation image;
  image.truth = {truth(row_mask({1, 20}, 0, 10))};
  image.predictions = {prediction(row_mask({2, 10}, 0, 10), 0.5)};
  EXPECT_THROW(average_precision(std::span(&image, 1)), InputError);
}

TEST(PrecisionRecallArea, Examples) {
  EXPECT_DOUBLE_EQ(precision_recall_area({{0.9, true}, {0.8, false}}, 1), 1.0);
  // Precision 0.5 at recall 1.
  EXPECT_DOUBLE_EQ(precision_recall_area({{0.9, false}, {0.8, true}}, 1), 0.5);
  EXPECT_DOUBLE_EQ(precision_recall_area({{0.9, true}}, 2), 0.5);
  // Equal scores collapse into one operating point.
  EXPECT_DOUBLE_EQ(precision_recall_area({{0.5, false}, {0.5, true}}, 1), 0.5);
  EXPECT_DOUBLE_EQ(precision_recall_area({}, 0), 0.0);
}

std::vector<ImageEvaluation> random_images(Rng& rng) {
  std::vector<ImageEvaluation> images(testing::uniform_size(rng, 1, 3));
  const GridShape s{6, 6};
  for (auto& image : images) {
    const LabelMap gt = testing::blocky_labels(rng, s, 3, 2);
    image.truth = truth_instances_from_labels(gt, {0, 1, 1, 2});
    const LabelMap pred = testing::blocky_labels(rng, s, 4, 2);
    for (auto& [label, mask] : masks_by_label(pred)) {
      image.predictions.push_back(prediction(mask, testing::uniform(rng, 0.05, 1.0), label % 2 + 1));
    }
  }
  return images;
}

TEST(AveragePrecisionProperty, ScoreScalingMonotonicityOneToOne) {
  Rng rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ImageEvaluation> images = random_images(rng);
    const ApReport r = average_precision(images);
    for (std::size_t t = 1; t < r.mean_per_threshold.size(); ++t) {
      ASSERT_LE(r.mean_per_threshold[t], r.mean_per_threshold[t - 1] + 1e-12);
    }
    for (const ClassAp& c : r.classes) {
      ASSERT_GE(c.ap, 0.0);
      ASSERT_LE(c.ap, 1.0);
    }
    const double scale = testing::uniform(rng, 0.1, 10.0);
    for (auto& image : images) {
      for (auto& p : image.predictions) p.score *= scale;
    }
    ASSERT_NEAR(average_precision(images).mean_ap, r.mean_ap, 1e-12);
  }
}

TEST(AveragePrecisionProperty, DuplicatePredictionsNeverMatchTwice) {
  Rng rng(63);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ImageEvaluation> images = random_images(rng);
    for (auto& image : images) {
      image.predictions.clear();
      for (const auto& gt : image.truth) {
        image.predictions.push_back(prediction(gt.mask, 0.9, gt.class_id));
        image.predictions.push_back(prediction(gt.mask, 0.8, gt.class_id));
      }
    }
    const ApReport r = average_precision(images);
    // A second match of the same truth would push recall past 1.
    for (const ClassAp& c : r.classes) {
      ASSERT_EQ(c.prediction_count, 2 * c.truth_count);
      for (double v : c.per_threshold) ASSERT_DOUBLE_EQ(v, 1.0);
    }
  }
}

TEST(Statistics, MedianPercentileFit) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  std::vector<double> v;
  for (int i = 1; i <= 20; ++i) v.push_back(i);
  EXPECT_DOUBLE_EQ(percentile(v, 0.95), 19.0);
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(RuntimeProfile, CsvHeaderAndRows) {
  const std::vector<GridShape> sizes{{4, 4}, {8, 8}};
  std::size_t calls = 0;
  const RuntimeProfile p = runtime_profile(sizes, 3, [&](GridShape) { return [&] { ++calls; }; });
  EXPECT_EQ(calls, 6u);
  ASSERT_EQ(p.rows.size(), 2u);
  EXPECT_EQ(p.rows[1].pixels, 64u);
  EXPECT_EQ(p.rows[0].seconds.size(), 3u);
  const std::string csv = runtime_csv(p);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "pixels,seconds_median,seconds_p95");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

}  // namespace
}  // namespace affcut
