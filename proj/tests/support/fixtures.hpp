#pragma once

// Hand-rolled generators and fixture builders shared by the test binaries.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"
#include "affcut/oracle.hpp"
#include "affcut/segment.hpp"
#include "affcut/synth.hpp"

namespace affcut::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Each pair becomes an edge with probability `density`.
inline AffinityGraph random_affinity_graph(Rng& rng, std::size_t n, double density) {
  AffinityGraph g;
  g.num_vertices = n;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (uniform(rng) < density) g.edges.push_back({u, v, uniform(rng)});
    }
  }
  return g;
}

struct PlantedGraph {
  AffinityGraph graph;
  std::vector<std::size_t> parts;  ///< restricted growth string
};

/// Vertices split into random groups; intra edges >= 0.5 + margin, inter
/// edges <= 0.5 - margin. Every group is internally connected by a path.
inline PlantedGraph planted_graph(Rng& rng, std::size_t n, double margin) {
  PlantedGraph out;
  out.graph.num_vertices = n;
  const std::size_t groups = uniform_size(rng, 1, std::max<std::size_t>(1, n / 2));
  std::vector<std::size_t> raw(n);
  for (auto& g : raw) g = uniform_size(rng, 0, groups - 1);
  std::vector<std::size_t> rename(groups, groups);
  std::size_t next = 0;
  out.parts.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (rename[raw[v]] == groups) rename[raw[v]] = next++;
    out.parts[v] = rename[raw[v]];
  }
  std::vector<std::size_t> last(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t p = out.parts[v];
    if (last[p] != n) out.graph.edges.push_back({last[p], v, uniform(rng, 0.5 + margin, 1.0)});
    last[p] = v;
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool exists = std::any_of(out.graph.edges.begin(), out.graph.edges.end(),
                                      [&](const WeightedEdge& e) { return e.u == u && e.v == v; });
      if (exists || uniform(rng) < 0.5) continue;
      const bool same = out.parts[u] == out.parts[v];
      out.graph.edges.push_back({u, v, same ? uniform(rng, 0.5 + margin, 1.0) : uniform(rng, 0.0, 0.5 - margin)});
    }
  }
  return out;
}

/// Restricted growth string of an arbitrary part assignment.
inline std::vector<std::size_t> canonical_parts(const std::vector<std::size_t>& parts) {
  std::vector<std::size_t> out(parts.size());
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& s) { return s.first == parts[i]; });
    if (it == seen.end()) {
      seen.emplace_back(parts[i], seen.size());
      out[i] = seen.size() - 1;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

/// Symmetric affinities in [0,1] with zero border channels.
inline AffinityMap random_affinity(Rng& rng, GridShape shape) {
  AffinityMap a(shape);
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      if (y + 1 < shape.height) a.set_vertical(y, x, static_cast<float>(uniform(rng)));
      if (x + 1 < shape.width) a.set_horizontal(y, x, static_cast<float>(uniform(rng)));
    }
  }
  return a;
}

inline LabelMap random_labels(Rng& rng, GridShape shape, Label max_label) {
  LabelMap out(shape, kBackground);
  for (Label& l : out.labels()) l = static_cast<Label>(uniform_size(rng, 0, static_cast<std::size_t>(max_label)));
  return out;
}

/// Blocky random labels: a coarse random grid upsampled by `block`.
inline LabelMap blocky_labels(Rng& rng, GridShape shape, Label max_label, std::size_t block) {
  const GridShape coarse{(shape.height + block - 1) / block, (shape.width + block - 1) / block};
  return upsample_nearest(random_labels(rng, coarse, max_label), block, shape);
}

/// Noise-free level for a label map: affinity 1 inside labels, 0 across,
/// one-hot semantics and one embedding center per label.
inline PyramidLevel ideal_level(const LabelMap& labels, const std::vector<std::size_t>& label_class,
                                std::size_t classes, const std::vector<std::vector<double>>& centers) {
  const GridShape shape = labels.shape();
  const std::size_t k = centers.front().size();
  PyramidLevel level;
  level.affinity = AffinityMap(shape);
  level.semantic = SemanticMap(shape, classes);
  level.embedding = EmbeddingMap(shape, k);
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      const auto l = static_cast<std::size_t>(labels.at(y, x));
      if (y + 1 < shape.height) level.affinity.set_vertical(y, x, labels.at(y, x) == labels.at(y + 1, x) ? 1.0f : 0.0f);
      if (x + 1 < shape.width) level.affinity.set_horizontal(y, x, labels.at(y, x) == labels.at(y, x + 1) ? 1.0f : 0.0f);
      level.semantic.at(label_class[l], y, x) = 1.0f;
      for (std::size_t j = 0; j < k; ++j) level.embedding.at(j, y, x) = static_cast<float>(centers[l][j]);
    }
  }
  return level;
}

/// Noise-free pyramid whose coarser levels are majority downsamples of `finest`.
inline AffinityPyramid ideal_pyramid(const LabelMap& finest, const std::vector<std::size_t>& label_class,
                                     const std::vector<ClassKind>& kinds,
                                     const std::vector<std::vector<double>>& centers, std::size_t levels) {
  AffinityPyramid p;
  p.class_kinds = kinds;
  LabelMap current = finest;
  for (std::size_t i = 0; i < levels; ++i) {
    p.levels.push_back(ideal_level(current, label_class, kinds.size(), centers));
    if (i + 1 < levels) current = downsample_majority(current);
  }
  return p;
}

inline Segment make_segment(std::size_t pixels, BoundingBox box, std::vector<double> semantic_mean,
                            std::vector<double> embedding_mean) {
  Segment s;
  s.pixel_count = pixels;
  s.bbox = box;
  for (double& v : semantic_mean) v *= static_cast<double>(pixels);
  for (double& v : embedding_mean) v *= static_cast<double>(pixels);
  s.semantic_sum = std::move(semantic_mean);
  s.embedding_sum = std::move(embedding_mean);
  return s;
}

}  // namespace affcut::testing
