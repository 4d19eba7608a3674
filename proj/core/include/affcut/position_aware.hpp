#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "affcut/contraction_graph.hpp"
#include "affcut/segment.hpp"

namespace affcut {

inline constexpr double kDefaultBeta = 0.5;

/// Position damping factor d(u, v) in (0, 1]. A zero center offset along an
/// axis contributes a factor of 1 for that axis.
double damping(const Segment& u, const Segment& v, double beta);

/// Jensen-Shannon divergence with base-2 logarithms, in [0, 1].
double jensen_shannon_divergence(std::span<const double> p, std::span<const double> q);

struct SegmentAffinity {
  double semantic = 0.0;   ///< 1 - JSD of the mean class distributions
  double embedding = 0.0;  ///< Gaussian kernel of the mean embeddings
};

/// Throws LogicError on empty segments.
SegmentAffinity segment_affinity(const Segment& u, const Segment& v);

struct PaGaecOptions {
  double threshold = 0.5;
  double beta = kDefaultBeta;
  /// Candidate pairs need d >= min_damping and the same dominant class,
  /// unless full_pairs is set.
  double min_damping = 1e-3;
  bool full_pairs = false;
};

/// Damped merge score A_s * A_g * d.
double pa_score(const Segment& u, const Segment& v, double beta);

/// Position-aware greedy merging over a set of segments. Returns a part index
/// per input segment, numbered in order of first appearance.
std::vector<std::size_t> pa_gaec(std::span<const Segment> segments, const PaGaecOptions& options = {});

/// Builds the candidate segment graph used by pa_gaec.
ContractionGraph build_segment_graph(std::span<const Segment> segments, const PaGaecOptions& options);

}  // namespace affcut
