#include "affcut/segment.hpp"

#include <algorithm>

namespace affcut {

void BoundingBox::include(int y, int x) {
  y_min = std::min(y_min, y);
  x_min = std::min(x_min, x);
  y_max = std::max(y_max, y);
  x_max = std::max(x_max, x);
}

void BoundingBox::merge(const BoundingBox& other) {
  y_min = std::min(y_min, other.y_min);
  x_min = std::min(x_min, other.x_min);
  y_max = std::max(y_max, other.y_max);
  x_max = std::max(x_max, other.x_max);
}

void Segment::absorb(const Segment& other) {
  if (pixel_count == 0) {
    *this = other;
    return;
  }
  if (other.pixel_count == 0) return;
  pixel_count += other.pixel_count;
  bbox.merge(other.bbox);
  if (semantic_sum.size() < other.semantic_sum.size()) semantic_sum.resize(other.semantic_sum.size());
  for (std::size_t i = 0; i < other.semantic_sum.size(); ++i) semantic_sum[i] += other.semantic_sum[i];
  if (embedding_sum.size() < other.embedding_sum.size()) embedding_sum.resize(other.embedding_sum.size());
  for (std::size_t i = 0; i < other.embedding_sum.size(); ++i) embedding_sum[i] += other.embedding_sum[i];
}

std::vector<double> Segment::mean_semantic() const {
  std::vector<double> mean(semantic_sum);
  if (pixel_count > 0) {
    for (double& v : mean) v /= static_cast<double>(pixel_count);
  }
  return mean;
}

std::vector<double> Segment::mean_embedding() const {
  std::vector<double> mean(embedding_sum);
  if (pixel_count > 0) {
    for (double& v : mean) v /= static_cast<double>(pixel_count);
  }
  return mean;
}

std::size_t Segment::dominant_class() const {
  if (semantic_sum.empty()) return 0;
  return static_cast<std::size_t>(std::max_element(semantic_sum.begin(), semantic_sum.end()) - semantic_sum.begin());
}

}  // namespace affcut
