#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "affcut/gaec.hpp"

namespace affcut {

inline constexpr std::size_t kOracleVertexCap = 12;

/// Calls `visit` with every set partition of {0..n-1} as a restricted growth
/// string, in lexicographic order. Returns the number of partitions.
std::uint64_t enumerate_partitions(std::size_t n, const std::function<void(std::span<const std::size_t>)>& visit);

struct MulticutSolution {
  std::vector<std::size_t> partition;  ///< restricted growth string
  double cost = 0.0;
};

/// Exact minimum-cost multicut by exhaustive enumeration. Ties resolve to the
/// lexicographically smallest partition. Throws InputError if n > cap or an
/// edge references an unknown vertex.
MulticutSolution exact_multicut(std::size_t num_vertices, std::span<const WeightedEdge> costs,
                                std::size_t cap = kOracleVertexCap);

/// Small graph with edge affinities, used for greedy-vs-exact comparisons.
struct AffinityGraph {
  std::size_t num_vertices = 0;
  std::vector<WeightedEdge> edges;  ///< weight = affinity in [0, 1]
};

struct GapEntry {
  double greedy_cost = 0.0;
  double optimal_cost = 0.0;
  double gap() const { return greedy_cost - optimal_cost; }
};

struct GapReport {
  std::vector<GapEntry> entries;
  std::size_t zero_gap = 0;  ///< |gap| <= tolerance
  std::size_t negative_gap = 0;  ///< greedy beat the oracle by more than tolerance
  double mean_gap = 0.0;
  double max_gap = 0.0;
};

/// Scores gaec (at `threshold`) and exact_multicut on logit costs for each instance.
GapReport greedy_gap_report(std::span<const AffinityGraph> instances, double threshold,
                            double tolerance = 1e-9, std::size_t cap = kOracleVertexCap);

std::vector<WeightedEdge> affinities_to_costs(std::span<const WeightedEdge> affinities);

}  // namespace affcut
