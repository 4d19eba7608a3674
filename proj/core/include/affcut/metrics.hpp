#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "affcut/cascade.hpp"
#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"
#include "affcut/rle.hpp"

namespace affcut {

struct GroundTruthInstance {
  Label id = kBackground;
  std::size_t class_id = 0;
  RleMask mask;
};

/// Instances of a truth label map; `instance_class[id]` gives each class.
std::vector<GroundTruthInstance> truth_instances_from_labels(const LabelMap& labels,
                                                             const std::vector<std::size_t>& instance_class);

struct ImageEvaluation {
  std::vector<ScoredInstance> predictions;
  std::vector<GroundTruthInstance> truth;
};

/// 0.50, 0.55, ..., 0.95.
std::vector<double> default_iou_thresholds();

struct ClassAp {
  std::size_t class_id = 0;
  std::size_t truth_count = 0;
  std::size_t prediction_count = 0;
  std::vector<double> per_threshold;
  double ap = 0.0;  ///< mean over thresholds
};

struct ApReport {
  std::vector<double> thresholds;
  std::vector<ClassAp> classes;          ///< classes with at least one truth instance
  std::vector<double> mean_per_threshold;
  double mean_ap = 0.0;
  double mean_ap50 = 0.0;
};

/// Cityscapes-style mask AP. A prediction matches the unmatched same-class
/// truth instance of highest IoU when that IoU is strictly greater than the
/// threshold. Throws InputError if mask resolutions differ within an image.
ApReport average_precision(std::span<const ImageEvaluation> images,
                           std::span<const double> thresholds = {});

/// AP of one class at one threshold from pooled match results.
/// `matches` holds (score, is_true_positive) for every prediction.
double precision_recall_area(std::vector<std::pair<double, bool>> matches, std::size_t truth_count);

struct RuntimeRow {
  std::size_t pixels = 0;
  std::vector<double> seconds;
  double median = 0.0;
  double p95 = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct RuntimeProfile {
  std::vector<RuntimeRow> rows;
  LinearFit fit;  ///< ln(median seconds) against ln(pixels)
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Median and nearest-rank 95th percentile.
double median(std::vector<double> values);
double percentile(std::vector<double> values, double q);

/// `prepare(shape)` builds an input outside the timed region and returns the
/// callable to time.
using TimedWork = std::function<void()>;
RuntimeProfile runtime_profile(std::span<const GridShape> sizes, std::size_t repeats,
                               const std::function<TimedWork(GridShape)>& prepare);

/// CSV with header `pixels,seconds_median,seconds_p95`.
std::string runtime_csv(const RuntimeProfile& profile);

}  // namespace affcut
