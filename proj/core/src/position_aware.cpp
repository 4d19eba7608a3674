#include "affcut/position_aware.hpp"

#include <algorithm>
#include <cmath>

#include "affcut/affinity_math.hpp"
#include "affcut/error.hpp"

namespace affcut {

namespace {

// min(1, 0.5 * extent / offset); a zero offset is the limit value 1.
double axis_factor(double extent, double offset) {
  if (offset == 0.0) return 1.0;
  return std::min(1.0, 0.5 * extent / offset);
}

}  // namespace

double damping(const Segment& u, const Segment& v, double beta) {
  const double vertical =
      axis_factor(std::max(u.bbox.height(), v.bbox.height()), std::abs(u.bbox.center_y() - v.bbox.center_y()));
  const double horizontal =
      axis_factor(std::max(u.bbox.width(), v.bbox.width()), std::abs(u.bbox.center_x() - v.bbox.center_x()));
  return std::pow(vertical, beta) * std::pow(horizontal, beta);
}

double jensen_shannon_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("distributions differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) total += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) total += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::clamp(total, 0.0, 1.0);
}

SegmentAffinity segment_affinity(const Segment& u, const Segment& v) {
  if (u.pixel_count == 0 || v.pixel_count == 0) throw LogicError("segment affinity of an empty segment");
  const std::vector<double> pu = u.mean_semantic();
  const std::vector<double> pv = v.mean_semantic();
  const std::vector<double> xu = u.mean_embedding();
  const std::vector<double> xv = v.mean_embedding();
  return {1.0 - jensen_shannon_divergence(pu, pv), phi(xu, xv)};
}

double pa_score(const Segment& u, const Segment& v, double beta) {
  const SegmentAffinity a = segment_affinity(u, v);
  return a.semantic * a.embedding * damping(u, v, beta);
}

ContractionGraph build_segment_graph(std::span<const Segment> segments, const PaGaecOptions& options) {
  ContractionGraph graph;
  std::vector<std::size_t> dominant;
  dominant.reserve(segments.size());
  for (const Segment& s : segments) {
    graph.add_vertex(s);
    dominant.push_back(s.dominant_class());
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      if (!options.full_pairs) {
        if (dominant[i] != dominant[j]) continue;
        if (damping(segments[i], segments[j], options.beta) < options.min_damping) continue;
      }
      graph.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j),
                     pa_score(segments[i], segments[j], options.beta));
    }
  }
  return graph;
}

std::vector<std::size_t> pa_gaec(std::span<const Segment> segments, const PaGaecOptions& options) {
  ContractionGraph graph = build_segment_graph(segments, options);
  const double beta = options.beta;
  const ContractionGraph::Rescorer rescore = [beta](const Segment& merged, const Segment& other) {
    return pa_score(merged, other, beta);
  };
  while (auto top = graph.peek_max()) {
    if (!(top->affinity > options.threshold)) break;
    graph.contract(top->key.lo, top->key.hi, rescore);
  }

  const std::vector<VertexId> root = graph.representatives();
  const std::size_t n = segments.size();
  std::vector<std::size_t> part(n);
  std::vector<std::size_t> rename(n, n);
  std::size_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t& r = rename[root[v]];
    if (r == n) r = next++;
    part[v] = r;
  }
  return part;
}

}  // namespace affcut
