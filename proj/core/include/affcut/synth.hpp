#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "affcut/affinity_math.hpp"
#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"
#include "affcut/metrics.hpp"

namespace affcut {

enum class ShapeKind { kRectangle, kEllipse, kPolygon };

struct NoiseSpec {
  double flip_rate = 0.0;           ///< probability an affinity edge is inverted
  double jitter_sigma = 0.0;        ///< additive Gaussian noise on affinities
  double semantic_smoothing = 0.0;  ///< label smoothing of one-hot semantics
  double embedding_sigma = 0.0;     ///< per-pixel Gaussian embedding noise
};

/// Parameters of a synthetic scene. `shape` is the input image size; the
/// finest pyramid level is a quarter of it along each axis.
struct SceneSpec {
  GridShape shape{512, 512};
  std::size_t levels = 4;
  std::size_t min_instances = 3;
  std::size_t max_instances = 12;
  std::vector<ShapeKind> shape_kinds{ShapeKind::kRectangle, ShapeKind::kEllipse, ShapeKind::kPolygon};
  double occluder_probability = 0.5;
  std::size_t classes = 9;             ///< including background classes
  std::size_t background_classes = 1;  ///< classes [0, background_classes) are background
  std::size_t embedding_dim = 8;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  /// Also materialise the input-resolution truth (off for timing runs).
  bool with_full_resolution_truth = true;

  /// Throws InputError on out-of-range parameters.
  void validate() const;
};

struct SyntheticInstance {
  Label id = kBackground;
  std::size_t class_id = 0;
  std::vector<double> embedding_center;
  bool occluded = false;  ///< split into two disjoint parts by an occluder
};

struct SyntheticScene {
  SceneSpec spec;
  AffinityPyramid pyramid;
  std::vector<SyntheticInstance> instances;
  std::vector<std::size_t> instance_class;  ///< class per label id, [0] = background class
  std::vector<LabelMap> level_truth;        ///< per pyramid level, [0] = finest
  LabelMap truth;                           ///< input resolution (empty unless requested)

  GroundTruthScene ground_truth(std::size_t level_index) const;
  std::vector<GroundTruthInstance> truth_instances() const;
};

/// Deterministic for a given spec (including seed).
SyntheticScene generate_scene(const SceneSpec& spec);

/// Majority-vote 2x downsampling; ties go to the smallest label.
LabelMap downsample_majority(const LabelMap& labels);

/// Spec with only affinity jitter, as used for ablations and timing.
SceneSpec moderate_noise_spec(GridShape shape, std::uint64_t seed);

}  // namespace affcut
