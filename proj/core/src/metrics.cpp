#include "affcut/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "affcut/error.hpp"

namespace affcut {

std::vector<GroundTruthInstance> truth_instances_from_labels(const LabelMap& labels,
                                                             const std::vector<std::size_t>& instance_class) {
  std::vector<GroundTruthInstance> out;
  for (auto& [label, mask] : masks_by_label(labels)) {
    const auto idx = static_cast<std::size_t>(label);
    if (idx >= instance_class.size()) {
      throw InputError("truth label " + std::to_string(label) + " has no class");
    }
    out.push_back({label, instance_class[idx], std::move(mask)});
  }
  return out;
}

std::vector<double> default_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(static_cast<double>(10 + i) / 20.0);
  return t;
}

double precision_recall_area(std::vector<std::pair<double, bool>> matches, std::size_t truth_count) {
  if (truth_count == 0) return 0.0;
  std::stable_sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<double> precision;
  std::vector<double> recall;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (matches[i].second) ++tp;
    // Equal scores form one operating point.
    if (i + 1 < matches.size() && matches[i + 1].first == matches[i].first) continue;
    precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(truth_count));
  }
  // All-point interpolation: precision envelope integrated over recall.
  double area = 0.0;
  double previous_recall = 0.0;
  for (std::size_t i = 0; i < precision.size(); ++i) {
    const double envelope = *std::max_element(precision.begin() + static_cast<std::ptrdiff_t>(i), precision.end());
    area += (recall[i] - previous_recall) * envelope;
    previous_recall = recall[i];
  }
  return area;
}

ApReport average_precision(std::span<const ImageEvaluation> images, std::span<const double> thresholds) {
  ApReport report;
  report.thresholds = thresholds.empty() ? default_iou_thresholds()
                                         : std::vector<double>(thresholds.begin(), thresholds.end());
  const std::size_t nt = report.thresholds.size();

  std::map<std::size_t, std::size_t> truth_count;
  std::map<std::size_t, std::size_t> prediction_count;
  std::map<std::size_t, std::vector<std::vector<std::pair<double, bool>>>> matches;

  for (const ImageEvaluation& image : images) {
    for (const auto& gt : image.truth) ++truth_count[gt.class_id];
    for (const auto& p : image.predictions) ++prediction_count[p.class_id];
    for (const auto& p : image.predictions) {
      for (const auto& gt : image.truth) {
        if (!(p.mask.shape() == gt.mask.shape())) throw InputError("prediction and truth masks differ in resolution");
      }
    }

    // IoU of every same-class pair, computed once per image.
    const std::size_t np = image.predictions.size();
    const std::size_t ng = image.truth.size();
    std::vector<double> overlap(np * ng, 0.0);
    for (std::size_t i = 0; i < np; ++i) {
      for (std::size_t j = 0; j < ng; ++j) {
        if (image.predictions[i].class_id == image.truth[j].class_id) {
          overlap[i * ng + j] = iou(image.predictions[i].mask, image.truth[j].mask);
        }
      }
    }
    std::vector<std::size_t> order(np);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return image.predictions[a].score > image.predictions[b].score;
    });

    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<bool> taken(ng, false);
      for (std::size_t i : order) {
        const ScoredInstance& p = image.predictions[i];
        double best = report.thresholds[t];
        std::size_t best_j = ng;
        for (std::size_t j = 0; j < ng; ++j) {
          if (taken[j] || image.truth[j].class_id != p.class_id) continue;
          if (overlap[i * ng + j] > best) {
            best = overlap[i * ng + j];
            best_j = j;
          }
        }
        if (best_j < ng) taken[best_j] = true;
        auto& per_class = matches[p.class_id];
        per_class.resize(nt);
        per_class[t].emplace_back(p.score, best_j < ng);
      }
    }
  }

  report.mean_per_threshold.assign(nt, 0.0);
  for (const auto& [cls, count] : truth_count) {
    ClassAp c;
    c.class_id = cls;
    c.truth_count = count;
    c.prediction_count = prediction_count.contains(cls) ? prediction_count.at(cls) : 0;
    c.per_threshold.assign(nt, 0.0);
    if (auto it = matches.find(cls); it != matches.end()) {
      for (std::size_t t = 0; t < nt; ++t) c.per_threshold[t] = precision_recall_area(it->second[t], count);
    }
    c.ap = nt == 0 ? 0.0 : std::accumulate(c.per_threshold.begin(), c.per_threshold.end(), 0.0) / static_cast<double>(nt);
    for (std::size_t t = 0; t < nt; ++t) report.mean_per_threshold[t] += c.per_threshold[t];
    report.classes.push_back(std::move(c));
  }
  if (!report.classes.empty()) {
    const double k = static_cast<double>(report.classes.size());
    for (double& m : report.mean_per_threshold) m /= k;
    double sum_ap = 0.0;
    double sum_ap50 = 0.0;
    for (const ClassAp& c : report.classes) {
      sum_ap += c.ap;
      for (std::size_t t = 0; t < nt; ++t) {
        if (std::abs(report.thresholds[t] - 0.5) < 1e-12) sum_ap50 += c.per_threshold[t];
      }
    }
    report.mean_ap = sum_ap / k;
    report.mean_ap50 = sum_ap50 / k;
  }
  return report;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("fit_line needs at least two paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("fit_line needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("percentile rank must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

RuntimeProfile runtime_profile(std::span<const GridShape> sizes, std::size_t repeats,
                               const std::function<TimedWork(GridShape)>& prepare) {
  if (repeats == 0) throw InputError("repeats must be positive");
  RuntimeProfile profile;
  std::vector<double> lx, ly;
  for (const GridShape& shape : sizes) {
    RuntimeRow row;
    row.pixels = shape.size();
    for (std::size_t r = 0; r < repeats; ++r) {
      TimedWork work = prepare(shape);
      const auto start = std::chrono::steady_clock::now();
      work();
      const auto stop = std::chrono::steady_clock::now();
      row.seconds.push_back(std::chrono::duration<double>(stop - start).count());
    }
    row.median = median(row.seconds);
    row.p95 = percentile(row.seconds, 0.95);
    lx.push_back(std::log(static_cast<double>(row.pixels)));
    ly.push_back(std::log(std::max(row.median, 1e-9)));
    profile.rows.push_back(std::move(row));
  }
  if (profile.rows.size() >= 2) profile.fit = fit_line(lx, ly);
  return profile;
}

std::string runtime_csv(const RuntimeProfile& profile) {
  std::ostringstream out;
  out.precision(9);
  out << "pixels,seconds_median,seconds_p95\n";
  for (const RuntimeRow& row : profile.rows) out << row.pixels << ',' << row.median << ',' << row.p95 << '\n';
  return out.str();
}

}  // namespace affcut
