#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "affcut/grid.hpp"

namespace affcut {

using Label = std::int32_t;

inline constexpr Label kUnlabeled = -1;
inline constexpr Label kBackground = 0;

inline bool is_instance(Label l) { return l > 0; }

/// Dense per-pixel labels: kUnlabeled, kBackground, or an instance id >= 1.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(GridShape shape, Label fill = kUnlabeled);
  LabelMap(GridShape shape, std::vector<Label> labels);

  GridShape shape() const { return shape_; }
  Label at(std::size_t y, std::size_t x) const { return labels_[shape_.index(y, x)]; }
  Label& at(std::size_t y, std::size_t x) { return labels_[shape_.index(y, x)]; }
  Label operator[](std::size_t pixel) const { return labels_[pixel]; }
  Label& operator[](std::size_t pixel) { return labels_[pixel]; }

  std::span<const Label> labels() const { return labels_; }
  std::span<Label> labels() { return labels_; }

  std::size_t count(Label l) const;
  Label max_label() const;

  bool operator==(const LabelMap&) const = default;

 private:
  GridShape shape_{};
  std::vector<Label> labels_;
};

/// Renumbers instance ids 1..n in raster order of each instance's first pixel.
/// kBackground and kUnlabeled are preserved.
LabelMap canonicalize(const LabelMap& labels);

/// 4-connected components of pixels sharing the same instance label.
/// Returns a map of component ids (>= 1) with non-instance pixels copied through.
LabelMap connected_components(const LabelMap& labels);

/// Marks pixels that have at least one 4-neighbour with a different label.
std::vector<std::uint8_t> boundary_mask(const LabelMap& labels);

/// Nearest-neighbour upsampling by an integer factor, cropped to `target`.
LabelMap upsample_nearest(const LabelMap& labels, std::size_t factor, GridShape target);

}  // namespace affcut
