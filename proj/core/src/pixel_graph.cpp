#include "affcut/pixel_graph.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "affcut/error.hpp"

namespace affcut {

LabelMap PixelGraph::labels() const {
  LabelMap out(shape, kBackground);
  const std::vector<VertexId> root = graph.representatives();
  std::vector<Label> rename(root.size(), kUnlabeled);
  Label next = 1;
  for (std::size_t p = 0; p < pixel_vertex.size(); ++p) {
    const VertexId v = pixel_vertex[p];
    if (v == kNoVertex) continue;
    Label& l = rename[root[v]];
    if (l == kUnlabeled) l = next++;
    out[p] = l;
  }
  return out;
}

std::vector<Segment> PixelGraph::segments(std::span<const VertexId> live) const {
  const std::vector<VertexId> root = graph.representatives();
  std::vector<std::size_t> slot(root.size(), live.size());
  std::vector<Segment> out(live.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    if (!graph.is_alive(live[i])) throw LogicError("vertex " + std::to_string(live[i]) + " is not alive");
    slot[live[i]] = i;
    Segment& s = out[i];
    s.pixel_count = graph.segment(live[i]).pixel_count;
    s.bbox = graph.segment(live[i]).bbox;
    s.semantic_sum.assign(classes, 0.0);
    s.embedding_sum.assign(embedding_dim, 0.0);
  }
  for (VertexId v = 0; v < root.size(); ++v) {
    const std::size_t i = slot[root[v]];
    if (i == live.size()) continue;
    const double* sem = &semantic_sums[v * classes];
    for (std::size_t j = 0; j < classes; ++j) out[i].semantic_sum[j] += sem[j];
    const double* emb = &embedding_sums[v * embedding_dim];
    for (std::size_t j = 0; j < embedding_dim; ++j) out[i].embedding_sum[j] += emb[j];
  }
  return out;
}

PixelGraph build_pixel_graph(const PyramidLevel& level, const LabelMap& seeds, const PixelGraphOptions& options) {
  const GridShape shape = level.shape();
  if (seeds.shape() != shape || level.semantic.shape() != shape || level.embedding.shape() != shape) {
    throw InputError("pixel graph inputs disagree in shape: affinity " + shape.to_string() + ", seeds " +
                     seeds.shape().to_string());
  }
  const AffinityMap& aff = level.affinity;
  const std::size_t w = shape.width;
  const std::size_t n = shape.size();

  PixelGraph result;
  result.shape = shape;
  result.pixel_vertex.assign(n, kNoVertex);
  auto& group = result.pixel_vertex;

  // Group ids in raster order of the first pixel of each group.
  VertexId groups = 0;
  std::vector<std::size_t> stack;
  for (std::size_t p = 0; p < n; ++p) {
    const Label seed = seeds[p];
    if (seed == kBackground || group[p] != kNoVertex) continue;
    const VertexId g = groups++;
    group[p] = g;
    if (seed == kUnlabeled) continue;
    stack.push_back(p);
    while (!stack.empty()) {
      const std::size_t q = stack.back();
      stack.pop_back();
      const std::size_t y = q / w;
      const std::size_t x = q % w;
      auto visit = [&](std::size_t r, float edge) {
        if (seeds[r] != seed || group[r] != kNoVertex) return;
        if (options.split_seeds_at && edge <= *options.split_seeds_at) return;
        group[r] = g;
        stack.push_back(r);
      };
      if (y > 0) visit(q - w, aff.at(Direction::kUp, y, x));
      if (y + 1 < shape.height) visit(q + w, aff.down(y, x));
      if (x > 0) visit(q - 1, aff.at(Direction::kLeft, y, x));
      if (x + 1 < w) visit(q + 1, aff.right(y, x));
    }
  }

  const std::size_t c = level.semantic.classes();
  const std::size_t k = level.embedding.dim();
  std::vector<std::size_t> counts(groups, 0);
  std::vector<BoundingBox> boxes(groups);
  result.classes = c;
  result.embedding_dim = k;
  auto& sem = result.semantic_sums;
  auto& emb = result.embedding_sums;
  sem.assign(static_cast<std::size_t>(groups) * c, 0.0);
  emb.assign(static_cast<std::size_t>(groups) * k, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    const VertexId g = group[p];
    if (g == kNoVertex) continue;
    const int y = static_cast<int>(p / w);
    const int x = static_cast<int>(p % w);
    if (counts[g]++ == 0) {
      boxes[g] = BoundingBox::of_pixel(y, x);
    } else {
      boxes[g].include(y, x);
    }
    double* s = &sem[g * c];
    for (std::size_t j = 0; j < c; ++j) s[j] += level.semantic.at_index(j, p);
    double* e = &emb[g * k];
    for (std::size_t j = 0; j < k; ++j) e[j] += level.embedding.at_index(j, p);
  }

  for (VertexId g = 0; g < groups; ++g) {
    Segment seg;
    seg.pixel_count = counts[g];
    seg.bbox = boxes[g];
    result.graph.add_vertex(std::move(seg));
  }

  // Every grid edge crossing between two vertices; pairs with several
  // crossings get the mean affinity.
  std::vector<std::tuple<VertexId, VertexId, float>> crossings;
  crossings.reserve(2 * n / 4);
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t p = y * w + x;
      const VertexId a = group[p];
      if (a == kNoVertex) continue;
      if (x + 1 < w) {
        const VertexId b = group[p + 1];
        if (b != kNoVertex && b != a) crossings.emplace_back(std::min(a, b), std::max(a, b), aff.right(y, x));
      }
      if (y + 1 < shape.height) {
        const VertexId b = group[p + w];
        if (b != kNoVertex && b != a) crossings.emplace_back(std::min(a, b), std::max(a, b), aff.down(y, x));
      }
    }
  }
  std::sort(crossings.begin(), crossings.end());
  for (std::size_t i = 0; i < crossings.size();) {
    const auto [a, b, first] = crossings[i];
    double sum = 0.0;
    std::size_t count = 0;
    while (i < crossings.size() && std::get<0>(crossings[i]) == a && std::get<1>(crossings[i]) == b) {
      sum += std::get<2>(crossings[i]);
      ++count;
      ++i;
    }
    result.graph.add_edge(a, b, sum / static_cast<double>(count));
  }
  return result;
}

}  // namespace affcut
