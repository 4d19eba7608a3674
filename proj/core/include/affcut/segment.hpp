#pragma once

#include <cstddef>
#include <vector>

namespace affcut {

/// Inclusive pixel bounding box in level coordinates.
struct BoundingBox {
  int y_min = 0;
  int x_min = 0;
  int y_max = 0;
  int x_max = 0;

  static BoundingBox of_pixel(int y, int x) { return {y, x, y, x}; }

  double height() const { return static_cast<double>(y_max - y_min + 1); }
  double width() const { return static_cast<double>(x_max - x_min + 1); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  double center_x() const { return 0.5 * (x_min + x_max); }

  void include(int y, int x);
  void merge(const BoundingBox& other);
  bool contains(int y, int x) const { return y >= y_min && y <= y_max && x >= x_min && x <= x_max; }

  bool operator==(const BoundingBox&) const = default;
};

/// Accumulated statistics of a group of pixels. Everything merges in O(c + k).
struct Segment {
  std::size_t pixel_count = 0;
  BoundingBox bbox;
  std::vector<double> semantic_sum;
  std::vector<double> embedding_sum;

  /// Adds `other`'s pixels: counts and sums add, bbox becomes the hull.
  void absorb(const Segment& other);

  std::vector<double> mean_semantic() const;
  std::vector<double> mean_embedding() const;

  /// Class with the largest accumulated probability (lowest index on ties).
  std::size_t dominant_class() const;
};

}  // namespace affcut
