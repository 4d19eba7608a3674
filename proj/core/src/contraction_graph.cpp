#include "affcut/contraction_graph.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "affcut/error.hpp"

namespace affcut {

namespace {

constexpr EdgeIndex kNoEdge = static_cast<EdgeIndex>(-1);

std::string pair_name(VertexId u, VertexId v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

using Incidence = ContractionGraph::Incidence;

// Adjacency lists are short for pixel vertices, so linear search wins over hashing.
EdgeIndex lookup(const std::vector<Incidence>& adj, VertexId t) {
  for (const Incidence& i : adj) {
    if (i.neighbour == t) return i.edge;
  }
  return kNoEdge;
}

void erase(std::vector<Incidence>& adj, VertexId t) {
  for (auto& i : adj) {
    if (i.neighbour == t) {
      i = adj.back();
      adj.pop_back();
      return;
    }
  }
}

}  // namespace

VertexId ContractionGraph::add_vertex(Segment segment) {
  const auto id = static_cast<VertexId>(segments_.size());
  segments_.push_back(std::move(segment));
  alive_.push_back(true);
  parent_.push_back(id);
  adjacency_.emplace_back().reserve(4);
  ++live_vertices_;
  return id;
}

void ContractionGraph::add_edge(VertexId u, VertexId v, double affinity) {
  if (u == v) throw LogicError("self-loop on vertex " + std::to_string(u));
  if (!is_alive(u) || !is_alive(v)) throw LogicError("edge " + pair_name(u, v) + " references a dead or unknown vertex");
  if (lookup(adjacency_[u], v) != kNoEdge) throw LogicError("duplicate edge " + pair_name(u, v));
  const auto e = static_cast<EdgeIndex>(edges_.size());
  edges_.push_back({EdgeKey::of(u, v), affinity, 0, true});
  adjacency_[u].push_back({v, e});
  adjacency_[v].push_back({u, e});
  ++live_edges_;
  push(e);
}

EdgeIndex ContractionGraph::find_edge(VertexId u, VertexId v) const {
  if (!is_alive(u) || !is_alive(v)) return kNoEdge;
  const bool u_smaller = adjacency_[u].size() <= adjacency_[v].size();
  return u_smaller ? lookup(adjacency_[u], v) : lookup(adjacency_[v], u);
}

bool ContractionGraph::has_edge(VertexId u, VertexId v) const { return find_edge(u, v) != kNoEdge; }

double ContractionGraph::affinity(VertexId u, VertexId v) const {
  const EdgeIndex e = find_edge(u, v);
  if (e == kNoEdge) throw LogicError("no edge " + pair_name(u, v));
  return edges_[e].affinity;
}

void ContractionGraph::push(EdgeIndex e) {
  const Edge& edge = edges_[e];
  queue_.push({edge.affinity, edge.key, e, edge.version});
}

void ContractionGraph::kill_edge(EdgeIndex e) {
  Edge& edge = edges_[e];
  edge.alive = false;
  ++edge.version;
  --live_edges_;
}

VertexId ContractionGraph::merge_structure(VertexId u, VertexId v, bool average_common) {
  const EdgeIndex uv = find_edge(u, v);
  if (uv == kNoEdge) throw LogicError("cannot contract missing edge " + pair_name(u, v));

  // Fold the smaller adjacency into the larger one.
  VertexId keep = u;
  VertexId gone = v;
  const std::size_t du = adjacency_[u].size();
  const std::size_t dv = adjacency_[v].size();
  if (dv > du || (dv == du && v < u)) std::swap(keep, gone);

  kill_edge(uv);
  erase(adjacency_[keep], gone);
  erase(adjacency_[gone], keep);

  auto& keep_adj = adjacency_[keep];
  for (const auto [t, e] : adjacency_[gone]) {
    auto& t_adj = adjacency_[t];
    erase(t_adj, gone);
    // t's list is usually the shorter one to search for keep.
    const EdgeIndex common = t_adj.size() <= keep_adj.size() ? lookup(t_adj, keep) : lookup(keep_adj, t);
    if (common != kNoEdge) {
      if (average_common) {
        Edge& shared = edges_[common];
        shared.affinity = 0.5 * (shared.affinity + edges_[e].affinity);
        ++shared.version;
        push(common);
      }
      kill_edge(e);
    } else {
      Edge& moved = edges_[e];
      moved.key = EdgeKey::of(keep, t);
      ++moved.version;
      if (average_common) push(e);
      keep_adj.push_back({t, e});
      t_adj.push_back({keep, e});
    }
  }
  std::vector<Incidence>().swap(adjacency_[gone]);

  segments_[keep].absorb(segments_[gone]);
  segments_[gone] = Segment{};
  alive_[gone] = false;
  parent_[gone] = keep;
  --live_vertices_;
  return keep;
}

VertexId ContractionGraph::contract(VertexId u, VertexId v) { return merge_structure(u, v, true); }

VertexId ContractionGraph::contract(VertexId u, VertexId v, const Rescorer& rescore) {
  const VertexId keep = merge_structure(u, v, false);
  const Segment& merged = segments_[keep];
  for (const auto& [t, e] : adjacency_[keep]) {
    Edge& edge = edges_[e];
    edge.affinity = rescore(merged, segments_[t]);
    ++edge.version;
    push(e);
  }
  return keep;
}

std::optional<ScoredEdge> ContractionGraph::peek_max() {
  while (!queue_.empty()) {
    const QueueEntry& top = queue_.top();
    const Edge& edge = edges_[top.edge];
    if (edge.alive && edge.version == top.version) return ScoredEdge{edge.key, edge.affinity};
    queue_.pop();
  }
  return std::nullopt;
}

VertexId ContractionGraph::representative(VertexId v) const {
  VertexId root = v;
  while (parent_[root] != root) root = parent_[root];
  return root;
}

std::vector<VertexId> ContractionGraph::representatives() const {
  const std::size_t n = parent_.size();
  std::vector<VertexId> root(n, static_cast<VertexId>(-1));
  std::vector<VertexId> path;
  for (VertexId v = 0; v < n; ++v) {
    VertexId x = v;
    while (root[x] == static_cast<VertexId>(-1) && parent_[x] != x) {
      path.push_back(x);
      x = parent_[x];
    }
    const VertexId r = root[x] == static_cast<VertexId>(-1) ? x : root[x];
    root[x] = r;
    for (VertexId p : path) root[p] = r;
    path.clear();
  }
  return root;
}

std::vector<VertexId> ContractionGraph::live_vertices() const {
  std::vector<VertexId> out;
  out.reserve(live_vertices_);
  for (VertexId v = 0; v < alive_.size(); ++v) {
    if (alive_[v]) out.push_back(v);
  }
  return out;
}

std::vector<ScoredEdge> ContractionGraph::live_edges() const {
  std::vector<ScoredEdge> out;
  out.reserve(live_edges_);
  for (const Edge& e : edges_) {
    if (e.alive) out.push_back({e.key, e.affinity});
  }
  std::sort(out.begin(), out.end(), [](const ScoredEdge& a, const ScoredEdge& b) { return a.key < b.key; });
  return out;
}

std::optional<ScoredEdge> ContractionGraph::scan_max() const {
  std::optional<ScoredEdge> best;
  for (const Edge& e : edges_) {
    if (!e.alive) continue;
    if (!best || e.affinity > best->affinity || (e.affinity == best->affinity && e.key < best->key)) {
      best = ScoredEdge{e.key, e.affinity};
    }
  }
  return best;
}

}  // namespace affcut
