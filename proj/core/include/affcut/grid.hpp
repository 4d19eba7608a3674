#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace affcut {

struct GridShape {
  std::size_t height = 1;
  std::size_t width = 1;

  std::size_t size() const { return height * width; }
  std::size_t index(std::size_t y, std::size_t x) const { return y * width + x; }
  bool operator==(const GridShape&) const = default;

  std::string to_string() const;
};

/// Shape of the next-coarser pyramid level (half size, rounding up).
GridShape half_shape(GridShape shape);

/// Neighbour channel order of an AffinityMap.
enum class Direction : std::size_t { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

inline constexpr std::size_t kNumDirections = 4;

/// Dense 4-neighbour affinities, stored channel-major as 4 x h x w floats.
class AffinityMap {
 public:
  AffinityMap() = default;
  explicit AffinityMap(GridShape shape);
  AffinityMap(GridShape shape, std::vector<float> values);

  GridShape shape() const { return shape_; }

  float at(Direction d, std::size_t y, std::size_t x) const {
    return values_[offset(d) + shape_.index(y, x)];
  }
  float& at(Direction d, std::size_t y, std::size_t x) {
    return values_[offset(d) + shape_.index(y, x)];
  }

  /// Affinity of the grid edge between (y, x) and (y, x + 1).
  float right(std::size_t y, std::size_t x) const { return at(Direction::kRight, y, x); }
  /// Affinity of the grid edge between (y, x) and (y + 1, x).
  float down(std::size_t y, std::size_t x) const { return at(Direction::kDown, y, x); }

  /// Sets the edge between (y, x) and (y + 1, x) in both directions.
  void set_vertical(std::size_t y, std::size_t x, float value);
  /// Sets the edge between (y, x) and (y, x + 1) in both directions.
  void set_horizontal(std::size_t y, std::size_t x, float value);

  std::span<const float> values() const { return values_; }
  std::span<float> values() { return values_; }
  std::span<const float> channel(Direction d) const {
    return std::span<const float>(values_).subspan(offset(d), shape_.size());
  }

  /// Replaces each mirrored pair by its mean and zeroes border channels.
  void symmetrize();

  /// Throws InputError unless values lie in [0,1], pairs agree within
  /// `tolerance` and border channels are zero.
  void validate(double tolerance = 1e-6) const;

 private:
  std::size_t offset(Direction d) const { return static_cast<std::size_t>(d) * shape_.size(); }

  GridShape shape_{};
  std::vector<float> values_;
};

/// Per-pixel class distributions, stored channel-major as c x h x w floats.
class SemanticMap {
 public:
  SemanticMap() = default;
  SemanticMap(GridShape shape, std::size_t classes);
  SemanticMap(GridShape shape, std::size_t classes, std::vector<float> values);

  GridShape shape() const { return shape_; }
  std::size_t classes() const { return classes_; }

  float at(std::size_t c, std::size_t y, std::size_t x) const {
    return values_[c * shape_.size() + shape_.index(y, x)];
  }
  float& at(std::size_t c, std::size_t y, std::size_t x) {
    return values_[c * shape_.size() + shape_.index(y, x)];
  }
  float at_index(std::size_t c, std::size_t pixel) const { return values_[c * shape_.size() + pixel]; }

  /// Most probable class at a pixel; ties resolve to the lowest class index.
  std::size_t argmax(std::size_t pixel) const;

  std::span<const float> values() const { return values_; }
  std::span<float> values() { return values_; }

  /// Distributions must be non-negative and sum to 1 within `tolerance`.
  void validate(double tolerance = 1e-5) const;

 private:
  GridShape shape_{};
  std::size_t classes_ = 0;
  std::vector<float> values_;
};

/// Per-pixel grouping embeddings, stored channel-major as k x h x w floats.
class EmbeddingMap {
 public:
  EmbeddingMap() = default;
  EmbeddingMap(GridShape shape, std::size_t dim);
  EmbeddingMap(GridShape shape, std::size_t dim, std::vector<float> values);

  GridShape shape() const { return shape_; }
  std::size_t dim() const { return dim_; }

  float at(std::size_t k, std::size_t y, std::size_t x) const {
    return values_[k * shape_.size() + shape_.index(y, x)];
  }
  float& at(std::size_t k, std::size_t y, std::size_t x) {
    return values_[k * shape_.size() + shape_.index(y, x)];
  }
  float at_index(std::size_t k, std::size_t pixel) const { return values_[k * shape_.size() + pixel]; }

  std::span<const float> values() const { return values_; }
  std::span<float> values() { return values_; }

  void validate() const;

 private:
  GridShape shape_{};
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

enum class ClassKind : std::uint8_t { kBackground, kInstance };

struct PyramidLevel {
  AffinityMap affinity;
  SemanticMap semantic;
  EmbeddingMap embedding;

  GridShape shape() const { return affinity.shape(); }
};

/// Multi-resolution network outputs. levels[0] is the finest level.
struct AffinityPyramid {
  std::vector<PyramidLevel> levels;
  std::vector<ClassKind> class_kinds;
  /// Resolution of the image the pyramid was computed from; defaults to 4x the finest level.
  std::optional<GridShape> input_shape;

  std::size_t num_levels() const { return levels.size(); }
  std::size_t num_classes() const { return class_kinds.size(); }
  std::size_t embedding_dim() const { return levels.empty() ? 0 : levels.front().embedding.dim(); }
  GridShape resolved_input_shape() const;

  /// Checks every container invariant; throws InputError naming the level and tensor.
  void validate() const;
};

}  // namespace affcut
