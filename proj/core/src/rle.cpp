#include "affcut/rle.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "affcut/error.hpp"

namespace affcut {

RleMask::RleMask(GridShape shape, std::vector<Run> runs) : shape_(shape), runs_(std::move(runs)) {
  std::size_t end = 0;
  bool first = true;
  for (const Run& r : runs_) {
    if (r.length == 0 || r.start + r.length > shape_.size() || (!first && r.start <= end)) {
      throw InputError("run-length mask runs must be non-empty, sorted, separated and inside the image");
    }
    end = r.start + r.length;
    first = false;
  }
}

RleMask RleMask::from_labels(const LabelMap& labels, Label label) {
  std::vector<Run> runs;
  const std::size_t n = labels.shape().size();
  for (std::size_t p = 0; p < n;) {
    if (labels[p] != label) {
      ++p;
      continue;
    }
    const std::size_t start = p;
    while (p < n && labels[p] == label) ++p;
    runs.push_back({start, p - start});
  }
  return RleMask(labels.shape(), std::move(runs));
}

std::vector<std::pair<Label, RleMask>> masks_by_label(const LabelMap& labels) {
  std::map<Label, std::vector<Run>> runs;
  const std::size_t n = labels.shape().size();
  for (std::size_t p = 0; p < n;) {
    const Label l = labels[p];
    const std::size_t start = p;
    while (p < n && labels[p] == l) ++p;
    if (is_instance(l)) runs[l].push_back({start, p - start});
  }
  std::vector<std::pair<Label, RleMask>> out;
  out.reserve(runs.size());
  for (auto& [l, r] : runs) out.emplace_back(l, RleMask(labels.shape(), std::move(r)));
  return out;
}

std::size_t RleMask::area() const {
  std::size_t total = 0;
  for (const Run& r : runs_) total += r.length;
  return total;
}

std::vector<std::uint8_t> RleMask::to_dense() const {
  std::vector<std::uint8_t> dense(shape_.size(), 0);
  for (const Run& r : runs_) std::fill_n(dense.begin() + static_cast<std::ptrdiff_t>(r.start), r.length, 1);
  return dense;
}

std::size_t intersection_area(const RleMask& a, const RleMask& b) {
  if (a.shape() != b.shape()) {
    throw InputError("mask resolutions differ: " + a.shape().to_string() + " vs " + b.shape().to_string());
  }
  const auto& ra = a.runs();
  const auto& rb = b.runs();
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t total = 0;
  while (i < ra.size() && j < rb.size()) {
    const std::size_t a_end = ra[i].start + ra[i].length;
    const std::size_t b_end = rb[j].start + rb[j].length;
    const std::size_t lo = std::max(ra[i].start, rb[j].start);
    const std::size_t hi = std::min(a_end, b_end);
    if (hi > lo) total += hi - lo;
    if (a_end < b_end) {
      ++i;
    } else {
      ++j;
    }
  }
  return total;
}

double iou(const RleMask& a, const RleMask& b) {
  const std::size_t inter = intersection_area(a, b);
  const std::size_t uni = a.area() + b.area() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace affcut
