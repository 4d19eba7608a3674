#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "affcut/cascade.hpp"
#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"

namespace affcut {

/// Borrowed channel-major tensors of one pyramid level:
/// affinity 4 x h x w, semantic c x h x w, embedding k x h x w.
struct LevelArrays {
  GridShape shape;
  std::size_t classes = 0;
  std::size_t embedding_dim = 0;
  std::span<const float> affinity;
  std::span<const float> semantic;
  std::span<const float> embedding;
};

/// Copies dense arrays into a validated pyramid (finest level first).
/// Throws InputError naming the level and tensor on any violation.
AffinityPyramid pyramid_from_arrays(std::span<const LevelArrays> levels, std::vector<ClassKind> class_kinds,
                                    std::optional<GridShape> input_shape = std::nullopt);

struct PartitionOptions {
  CascadeConfig cascade;
  RenderOptions render;
};

struct PartitionOutput {
  GridShape input_shape;
  std::vector<ScoredInstance> instances;
  /// Input-resolution label image; ids match `instances`.
  LabelMap labels;
};

/// The full `partition` pipeline: cascade, then rendering at input resolution.
PartitionOutput partition(const AffinityPyramid& pyramid, const PartitionOptions& options = {});

}  // namespace affcut
