#include "affcut/grid.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "affcut/error.hpp"

namespace affcut {

namespace {

void require_shape(GridShape shape) {
  if (shape.height == 0 || shape.width == 0) {
    throw InputError("grid shape must be at least 1x1, got " + shape.to_string());
  }
}

void require_size(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    std::ostringstream os;
    os << what << ": expected " << expected << " values, got " << actual;
    throw InputError(os.str());
  }
}

}  // namespace

std::string GridShape::to_string() const {
  return std::to_string(height) + "x" + std::to_string(width);
}

GridShape half_shape(GridShape shape) {
  return {(shape.height + 1) / 2, (shape.width + 1) / 2};
}

AffinityMap::AffinityMap(GridShape shape) : AffinityMap(shape, std::vector<float>(kNumDirections * shape.size())) {}

AffinityMap::AffinityMap(GridShape shape, std::vector<float> values) : shape_(shape), values_(std::move(values)) {
  require_shape(shape);
  require_size(values_.size(), kNumDirections * shape.size(), "affinity map");
}

void AffinityMap::set_vertical(std::size_t y, std::size_t x, float value) {
  at(Direction::kDown, y, x) = value;
  at(Direction::kUp, y + 1, x) = value;
}

void AffinityMap::set_horizontal(std::size_t y, std::size_t x, float value) {
  at(Direction::kRight, y, x) = value;
  at(Direction::kLeft, y, x + 1) = value;
}

void AffinityMap::symmetrize() {
  const auto [h, w] = shape_;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (y + 1 < h) set_vertical(y, x, (down(y, x) + at(Direction::kUp, y + 1, x)) * 0.5f);
      if (x + 1 < w) set_horizontal(y, x, (right(y, x) + at(Direction::kLeft, y, x + 1)) * 0.5f);
    }
  }
  for (std::size_t x = 0; x < w; ++x) {
    at(Direction::kUp, 0, x) = 0.0f;
    at(Direction::kDown, h - 1, x) = 0.0f;
  }
  for (std::size_t y = 0; y < h; ++y) {
    at(Direction::kLeft, y, 0) = 0.0f;
    at(Direction::kRight, y, w - 1) = 0.0f;
  }
}

void AffinityMap::validate(double tolerance) const {
  const auto [h, w] = shape_;
  for (float v : values_) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      throw InputError("affinity value outside [0,1]: " + std::to_string(v));
    }
  }
  auto fail = [](const char* what, std::size_t y, std::size_t x) {
    std::ostringstream os;
    os << "affinity " << what << " at (" << y << ", " << x << ")";
    throw InputError(os.str());
  };
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (y + 1 < h && std::abs(down(y, x) - at(Direction::kUp, y + 1, x)) > tolerance) fail("not symmetric (down/up)", y, x);
      if (x + 1 < w && std::abs(right(y, x) - at(Direction::kLeft, y, x + 1)) > tolerance) fail("not symmetric (right/left)", y, x);
      if (y == 0 && at(Direction::kUp, y, x) != 0.0f) fail("border channel 'up' non-zero", y, x);
      if (y + 1 == h && down(y, x) != 0.0f) fail("border channel 'down' non-zero", y, x);
      if (x == 0 && at(Direction::kLeft, y, x) != 0.0f) fail("border channel 'left' non-zero", y, x);
      if (x + 1 == w && right(y, x) != 0.0f) fail("border channel 'right' non-zero", y, x);
    }
  }
}

SemanticMap::SemanticMap(GridShape shape, std::size_t classes)
    : SemanticMap(shape, classes, std::vector<float>(classes * shape.size())) {}

SemanticMap::SemanticMap(GridShape shape, std::size_t classes, std::vector<float> values)
    : shape_(shape), classes_(classes), values_(std::move(values)) {
  require_shape(shape);
  if (classes == 0) throw InputError("semantic map needs at least one class");
  require_size(values_.size(), classes * shape.size(), "semantic map");
}

std::size_t SemanticMap::argmax(std::size_t pixel) const {
  std::size_t best = 0;
  float best_value = at_index(0, pixel);
  for (std::size_t c = 1; c < classes_; ++c) {
    const float v = at_index(c, pixel);
    if (v > best_value) {
      best_value = v;
      best = c;
    }
  }
  return best;
}

void SemanticMap::validate(double tolerance) const {
  const std::size_t n = shape_.size();
  for (std::size_t p = 0; p < n; ++p) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes_; ++c) {
      const float v = at_index(c, p);
      if (!std::isfinite(v) || v < 0.0f) {
        throw InputError("semantic probability invalid at pixel " + std::to_string(p));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tolerance) {
      throw InputError("semantic distribution at pixel " + std::to_string(p) + " sums to " + std::to_string(sum));
    }
  }
}

EmbeddingMap::EmbeddingMap(GridShape shape, std::size_t dim)
    : EmbeddingMap(shape, dim, std::vector<float>(dim * shape.size())) {}

EmbeddingMap::EmbeddingMap(GridShape shape, std::size_t dim, std::vector<float> values)
    : shape_(shape), dim_(dim), values_(std::move(values)) {
  require_shape(shape);
  if (dim == 0) throw InputError("embedding map needs dimension >= 1");
  require_size(values_.size(), dim * shape.size(), "embedding map");
}

void EmbeddingMap::validate() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw InputError("non-finite embedding value at index " + std::to_string(i));
  }
}

GridShape AffinityPyramid::resolved_input_shape() const {
  if (input_shape) return *input_shape;
  if (levels.empty()) return {};
  const GridShape finest = levels.front().shape();
  return {finest.height * 4, finest.width * 4};
}

void AffinityPyramid::validate() const {
  if (levels.empty()) throw InputError("pyramid has no levels");
  if (class_kinds.empty()) throw InputError("pyramid has no classes");
  const std::size_t c = class_kinds.size();
  const std::size_t k = levels.front().embedding.dim();
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const PyramidLevel& level = levels[i];
    const std::string where = "level " + std::to_string(i + 1);
    const GridShape shape = level.shape();
    try {
      if (level.semantic.shape() != shape || level.embedding.shape() != shape) {
        throw InputError("tensor shapes disagree");
      }
      if (level.semantic.classes() != c) throw InputError("semantic class count differs from class_kinds");
      if (level.embedding.dim() != k) throw InputError("embedding dimension differs between levels");
      if (i > 0 && half_shape(levels[i - 1].shape()) != shape) {
        throw InputError("shape " + shape.to_string() + " is not half of " + levels[i - 1].shape().to_string());
      }
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    try {
      level.affinity.validate();
    } catch (const InputError& e) {
      throw InputError(where + " affinity: " + e.what());
    }
    try {
      level.semantic.validate();
    } catch (const InputError& e) {
      throw InputError(where + " semantic: " + e.what());
    }
    try {
      level.embedding.validate();
    } catch (const InputError& e) {
      throw InputError(where + " embedding: " + e.what());
    }
  }
}

}  // namespace affcut
