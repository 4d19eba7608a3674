#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"
#include "affcut/rle.hpp"
#include "affcut/segment.hpp"

namespace affcut {

enum class BackgroundMode {
  kArgmax,      ///< participate iff the most probable class is an instance class
  kProbability  ///< participate iff total instance-class probability exceeds a threshold
};

struct CascadeConfig {
  double threshold = 0.5;
  double beta = 0.5;
  bool use_gas = false;
  bool use_pa_gaec = true;
  std::uint64_t seed = 0;
  BackgroundMode background_mode = BackgroundMode::kArgmax;
  double background_threshold = 0.5;
  /// Cut seed regions along grid edges at or below `threshold`.
  bool split_stale_seeds = true;
  /// Full candidate graph in PA-GAEC instead of the pruned one.
  bool pa_full_pairs = false;
};

/// 2x nearest upsampling followed by unlabelling every pixel that has a
/// 4-neighbour with a different label. `target` must be 2x the source size,
/// or one less for odd sizes; throws InputError otherwise.
LabelMap upsample_labels(const LabelMap& labels, GridShape target);

/// Which pixels of a level take part in partitioning.
std::vector<std::uint8_t> participation_mask(const PyramidLevel& level, const std::vector<ClassKind>& class_kinds,
                                             const CascadeConfig& config);

struct SegmentRecord {
  Label id = kBackground;
  Segment stats;
};

struct LevelReport {
  std::size_t level = 0;  ///< 1 = finest
  std::size_t vertices = 0;
  std::size_t gaec_contractions = 0;
  std::size_t segments_after_gaec = 0;
  std::size_t segments_after_pa = 0;
  bool used_gas = false;
};

struct CascadeResult {
  LabelMap labels;  ///< finest-level labels, canonical instance ids
  std::vector<SegmentRecord> segments;
  std::vector<LevelReport> levels;  ///< coarsest first
};

/// Coarse-to-fine partitioning of a whole pyramid.
CascadeResult cascade_gaec(const AffinityPyramid& pyramid, const CascadeConfig& config = {});

/// Per-instance statistics of a label map against a pyramid level, sorted by id.
std::vector<SegmentRecord> collect_segments(const LabelMap& labels, const PyramidLevel& level);

struct ScoredInstance {
  Label id = kBackground;
  std::size_t class_id = 0;
  double score = 0.0;
  std::size_t level_pixels = 0;  ///< pixel count at the finest pyramid level
  RleMask mask;                  ///< at input resolution
};

struct RenderOptions {
  std::size_t min_pixels = 16;
  std::size_t scale = 4;
};

/// Scores each segment by its best instance class and upsamples its mask to
/// `input_shape`. Segments smaller than min_pixels are dropped.
std::vector<ScoredInstance> render_instances(const LabelMap& labels, const std::vector<SegmentRecord>& segments,
                                             const std::vector<ClassKind>& class_kinds, GridShape input_shape,
                                             const RenderOptions& options = {});

/// Dense input-resolution label image of rendered instances (0 = background).
LabelMap instance_label_image(const std::vector<ScoredInstance>& instances, GridShape input_shape);

}  // namespace affcut
