#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <utility>
#include <vector>

#include "affcut/segment.hpp"

namespace affcut {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint32_t;

struct EdgeKey {
  VertexId lo = 0;
  VertexId hi = 0;

  static EdgeKey of(VertexId a, VertexId b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }
  auto operator<=>(const EdgeKey&) const = default;
};

/// A live edge popped from the queue.
struct ScoredEdge {
  EdgeKey key;
  double affinity = 0.0;
};

/// Vertices carrying Segment statistics, symmetric weighted adjacency and a
/// max-priority queue over edge affinities with versioned lazy deletion.
///
/// Queue order is affinity descending, then EdgeKey ascending, so equal
/// affinities contract the lexicographically smallest vertex pair first.
class ContractionGraph {
 public:
  /// Recomputes the affinity of an edge between two (already merged) segments.
  using Rescorer = std::function<double(const Segment& merged, const Segment& neighbour)>;

  ContractionGraph() = default;

  VertexId add_vertex(Segment segment);
  /// Throws LogicError on self-loops, duplicate edges or unknown vertices.
  void add_edge(VertexId u, VertexId v, double affinity);

  /// Merges v into u (or u into v) and returns the surviving id.
  ///
  /// Without a rescorer, an edge to a common neighbour t becomes the mean of
  /// a(u,t) and a(v,t) and all other edges keep their affinity. With a
  /// rescorer, every edge of the merged vertex is recomputed from the merged
  /// statistics. Throws LogicError if the edge (u, v) does not exist.
  VertexId contract(VertexId u, VertexId v);
  VertexId contract(VertexId u, VertexId v, const Rescorer& rescore);

  /// Highest-affinity live edge, discarding stale queue entries on the way.
  std::optional<ScoredEdge> peek_max();

  bool is_alive(VertexId v) const { return v < alive_.size() && alive_[v]; }
  bool has_edge(VertexId u, VertexId v) const;
  /// Throws LogicError if the edge does not exist.
  double affinity(VertexId u, VertexId v) const;

  const Segment& segment(VertexId v) const { return segments_[v]; }
  struct Incidence {
    VertexId neighbour;
    EdgeIndex edge;
  };
  /// Incident live edges of a vertex, in no particular order.
  const std::vector<Incidence>& neighbours(VertexId v) const { return adjacency_[v]; }

  /// Surviving vertex that an original vertex was merged into.
  VertexId representative(VertexId v) const;
  /// representative() of every vertex, in O(V) total.
  std::vector<VertexId> representatives() const;

  std::size_t vertex_capacity() const { return segments_.size(); }
  std::size_t live_vertex_count() const { return live_vertices_; }
  std::size_t live_edge_count() const { return live_edges_; }
  std::vector<VertexId> live_vertices() const;
  /// Every live edge, sorted by key.
  std::vector<ScoredEdge> live_edges() const;

  /// Maximum over live edges by exhaustive scan (for verification).
  std::optional<ScoredEdge> scan_max() const;

 private:
  struct Edge {
    EdgeKey key;
    double affinity = 0.0;
    std::uint32_t version = 0;
    bool alive = false;
  };

  struct QueueEntry {
    double affinity;
    EdgeKey key;
    EdgeIndex edge;
    std::uint32_t version;

    // std::priority_queue pops the largest element.
    bool operator<(const QueueEntry& other) const {
      if (affinity != other.affinity) return affinity < other.affinity;
      return key > other.key;
    }
  };

  EdgeIndex find_edge(VertexId u, VertexId v) const;
  void push(EdgeIndex e);
  void kill_edge(EdgeIndex e);
  VertexId merge_structure(VertexId u, VertexId v, bool average_common);

  std::vector<Segment> segments_;
  std::vector<bool> alive_;
  std::vector<VertexId> parent_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<Edge> edges_;
  std::priority_queue<QueueEntry> queue_;
  std::size_t live_vertices_ = 0;
  std::size_t live_edges_ = 0;
};

}  // namespace affcut
