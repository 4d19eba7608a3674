#include "affcut/gaec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affcut/error.hpp"

namespace affcut {

std::size_t gaec(ContractionGraph& graph, double threshold, const ContractionObserver& observer) {
  std::size_t contractions = 0;
  while (auto top = graph.peek_max()) {
    if (!(top->affinity > threshold)) break;
    if (observer) observer(graph, *top);
    graph.contract(top->key.lo, top->key.hi);
    ++contractions;
  }
  return contractions;
}

double affinity_to_cost(double affinity) {
  constexpr double kEps = 1e-6;
  const double a = std::clamp(affinity, kEps, 1.0 - kEps);
  return std::log(a / (1.0 - a));
}

double multicut_cost(std::span<const std::size_t> partition, std::span<const WeightedEdge> costs) {
  double total = 0.0;
  for (const WeightedEdge& e : costs) {
    if (e.u >= partition.size() || e.v >= partition.size()) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") references an unknown vertex");
    }
    if (partition[e.u] != partition[e.v]) total += e.weight;
  }
  return total;
}

std::vector<std::size_t> gaec_partition(std::size_t num_vertices, std::span<const WeightedEdge> affinities,
                                        double threshold) {
  ContractionGraph graph;
  for (std::size_t v = 0; v < num_vertices; ++v) {
    Segment s;
    s.pixel_count = 1;
    graph.add_vertex(std::move(s));
  }
  for (const WeightedEdge& e : affinities) {
    if (e.u >= num_vertices || e.v >= num_vertices) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") references an unknown vertex");
    }
    graph.add_edge(static_cast<VertexId>(e.u), static_cast<VertexId>(e.v), e.weight);
  }
  gaec(graph, threshold);

  const std::vector<VertexId> root = graph.representatives();
  std::vector<std::size_t> part(num_vertices);
  std::vector<std::size_t> rename(num_vertices, num_vertices);
  std::size_t next = 0;
  for (std::size_t v = 0; v < num_vertices; ++v) {
    std::size_t& r = rename[root[v]];
    if (r == num_vertices) r = next++;
    part[v] = r;
  }
  return part;
}

}  // namespace affcut
