#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "affcut/contraction_graph.hpp"

namespace affcut {

/// Called before each contraction with the edge about to be contracted.
using ContractionObserver = std::function<void(const ContractionGraph&, const ScoredEdge&)>;

/// Greedy edge contraction: contracts the highest-affinity edge while it is
/// strictly greater than `threshold`. Returns the number of contractions.
std::size_t gaec(ContractionGraph& graph, double threshold, const ContractionObserver& observer = {});

/// Edge of a plain weighted graph (affinity or multicut cost, depending on use).
struct WeightedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 0.0;
};

/// Cost of cutting an edge with affinity `a`: logit(a) with a clipped to [1e-6, 1 - 1e-6].
double affinity_to_cost(double affinity);

/// Sum of the costs of edges whose endpoints lie in different parts.
/// Throws InputError if an edge references a vertex outside `partition`.
double multicut_cost(std::span<const std::size_t> partition, std::span<const WeightedEdge> costs);

/// Runs gaec on a graph of `num_vertices` unit vertices and returns a part
/// index per vertex, numbered in order of first appearance.
std::vector<std::size_t> gaec_partition(std::size_t num_vertices, std::span<const WeightedEdge> affinities,
                                        double threshold);

}  // namespace affcut
