#include "affcut/partition.hpp"

#include <string>
#include <utility>

#include "affcut/error.hpp"

namespace affcut {

namespace {

std::vector<float> copy_tensor(std::span<const float> data, std::size_t expected, std::size_t level,
                               const char* tensor) {
  if (data.size() != expected) {
    throw InputError("level " + std::to_string(level + 1) + " " + tensor + ": expected " + std::to_string(expected) +
                     " values, got " + std::to_string(data.size()));
  }
  return {data.begin(), data.end()};
}

}  // namespace

AffinityPyramid pyramid_from_arrays(std::span<const LevelArrays> levels, std::vector<ClassKind> class_kinds,
                                    std::optional<GridShape> input_shape) {
  AffinityPyramid pyramid;
  pyramid.class_kinds = std::move(class_kinds);
  pyramid.input_shape = input_shape;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const LevelArrays& a = levels[i];
    const std::size_t n = a.shape.size();
    PyramidLevel level;
    level.affinity = AffinityMap(a.shape, copy_tensor(a.affinity, kNumDirections * n, i, "affinity"));
    level.semantic = SemanticMap(a.shape, a.classes, copy_tensor(a.semantic, a.classes * n, i, "semantic"));
    level.embedding =
        EmbeddingMap(a.shape, a.embedding_dim, copy_tensor(a.embedding, a.embedding_dim * n, i, "embedding"));
    pyramid.levels.push_back(std::move(level));
  }
  pyramid.validate();
  return pyramid;
}

PartitionOutput partition(const AffinityPyramid& pyramid, const PartitionOptions& options) {
  const CascadeResult result = cascade_gaec(pyramid, options.cascade);
  PartitionOutput out;
  out.input_shape = pyramid.resolved_input_shape();
  out.instances = render_instances(result.labels, result.segments, pyramid.class_kinds, out.input_shape, options.render);
  out.labels = instance_label_image(out.instances, out.input_shape);
  return out;
}

}  // namespace affcut
