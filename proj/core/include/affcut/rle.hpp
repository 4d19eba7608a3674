#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"

namespace affcut {

/// Run of consecutive pixels in row-major order.
struct Run {
  std::size_t start = 0;
  std::size_t length = 0;
  bool operator==(const Run&) const = default;
};

/// Binary mask stored as sorted, non-overlapping, non-adjacent runs.
class RleMask {
 public:
  RleMask() = default;
  RleMask(GridShape shape, std::vector<Run> runs);

  static RleMask from_labels(const LabelMap& labels, Label label);

  GridShape shape() const { return shape_; }
  const std::vector<Run>& runs() const { return runs_; }
  std::size_t area() const;
  std::vector<std::uint8_t> to_dense() const;

  bool operator==(const RleMask&) const = default;

 private:
  GridShape shape_{};
  std::vector<Run> runs_;
};

/// Run-length masks of every instance label in one pass, keyed by label.
std::vector<std::pair<Label, RleMask>> masks_by_label(const LabelMap& labels);

std::size_t intersection_area(const RleMask& a, const RleMask& b);
/// Intersection over union; 0 when both masks are empty.
double iou(const RleMask& a, const RleMask& b);

}  // namespace affcut
