#include "affcut/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "affcut/error.hpp"

namespace affcut {

std::uint64_t enumerate_partitions(std::size_t n, const std::function<void(std::span<const std::size_t>)>& visit) {
  if (n == 0) {
    visit({});
    return 1;
  }
  // a is the restricted growth string, running_max[i] = max(a[0..i]).
  std::vector<std::size_t> a(n, 0);
  std::vector<std::size_t> running_max(n, 0);
  std::uint64_t count = 0;
  while (true) {
    visit(a);
    ++count;
    std::size_t i = n - 1;
    while (i > 0 && a[i] > running_max[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    running_max[i] = std::max(running_max[i - 1], a[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j] = 0;
      running_max[j] = running_max[i];
    }
  }
  return count;
}

MulticutSolution exact_multicut(std::size_t num_vertices, std::span<const WeightedEdge> costs, std::size_t cap) {
  if (num_vertices > cap) {
    throw InputError("exact multicut is capped at " + std::to_string(cap) + " vertices, got " +
                     std::to_string(num_vertices));
  }
  for (const WeightedEdge& e : costs) {
    if (e.u >= num_vertices || e.v >= num_vertices) {
      throw InputError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") references an unknown vertex");
    }
  }
  MulticutSolution best;
  bool have = false;
  enumerate_partitions(num_vertices, [&](std::span<const std::size_t> partition) {
    double cost = 0.0;
    for (const WeightedEdge& e : costs) {
      if (partition[e.u] != partition[e.v]) cost += e.weight;
    }
    if (!have || cost < best.cost) {
      best.cost = cost;
      best.partition.assign(partition.begin(), partition.end());
      have = true;
    }
  });
  return best;
}

std::vector<WeightedEdge> affinities_to_costs(std::span<const WeightedEdge> affinities) {
  std::vector<WeightedEdge> costs(affinities.begin(), affinities.end());
  for (WeightedEdge& e : costs) e.weight = affinity_to_cost(e.weight);
  return costs;
}

GapReport greedy_gap_report(std::span<const AffinityGraph> instances, double threshold, double tolerance,
                            std::size_t cap) {
  GapReport report;
  for (const AffinityGraph& g : instances) {
    const std::vector<WeightedEdge> costs = affinities_to_costs(g.edges);
    const std::vector<std::size_t> greedy = gaec_partition(g.num_vertices, g.edges, threshold);
    GapEntry entry;
    entry.greedy_cost = multicut_cost(greedy, costs);
    entry.optimal_cost = exact_multicut(g.num_vertices, costs, cap).cost;
    const double gap = entry.gap();
    if (std::abs(gap) <= tolerance) ++report.zero_gap;
    if (gap < -tolerance) ++report.negative_gap;
    report.mean_gap += gap;
    report.max_gap = report.entries.empty() ? gap : std::max(report.max_gap, gap);
    report.entries.push_back(entry);
  }
  if (!report.entries.empty()) report.mean_gap /= static_cast<double>(report.entries.size());
  return report;
}

}  // namespace affcut
