#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "affcut/contraction_graph.hpp"
#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"

namespace affcut {

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct PixelGraphOptions {
  /// When set, a seed region is additionally cut along grid edges whose
  /// affinity is <= this value, so stale seeds cannot glue together pixels
  /// the current level separates.
  std::optional<double> split_seeds_at;
};

/// Contraction graph over one pyramid level plus the pixel -> vertex map.
struct PixelGraph {
  ContractionGraph graph;
  GridShape shape;
  /// Initial vertex of every pixel, kNoVertex for excluded (background) pixels.
  std::vector<VertexId> pixel_vertex;

  /// Per initial vertex: semantic (c) and embedding (k) sums, row-major.
  std::size_t classes = 0;
  std::size_t embedding_dim = 0;
  std::vector<double> semantic_sums;
  std::vector<double> embedding_sums;

  /// Current labels: one instance id per surviving vertex, ids in raster
  /// order of first pixel. Excluded pixels are kBackground.
  LabelMap labels() const;

  /// Full statistics of the given surviving vertices, aggregated from the
  /// initial vertices merged into each.
  std::vector<Segment> segments(std::span<const VertexId> live) const;
};

/// One vertex per kUnlabeled pixel and one per 4-connected seed region;
/// kBackground pixels are excluded. Adjacent vertices get one edge whose
/// affinity is the mean of all grid edges crossing between them.
/// Graph vertices carry pixel counts and boxes only; see PixelGraph::segments.
PixelGraph build_pixel_graph(const PyramidLevel& level, const LabelMap& seeds,
                             const PixelGraphOptions& options = {});

}  // namespace affcut
