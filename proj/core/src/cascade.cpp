#include "affcut/cascade.hpp"

#include <algorithm>
#include <unordered_map>

#include "affcut/error.hpp"
#include "affcut/gaec.hpp"
#include "affcut/gas.hpp"
#include "affcut/pixel_graph.hpp"
#include "affcut/position_aware.hpp"

namespace affcut {

namespace {

bool upsample_ok(std::size_t source, std::size_t target) {
  return target == 2 * source || target + 1 == 2 * source;
}

void check_structure(const AffinityPyramid& pyramid) {
  if (pyramid.levels.empty()) throw InputError("pyramid has no levels");
  const std::size_t c = pyramid.num_classes();
  for (std::size_t i = 0; i < pyramid.levels.size(); ++i) {
    const PyramidLevel& level = pyramid.levels[i];
    const std::string where = "level " + std::to_string(i + 1) + ": ";
    if (level.semantic.shape() != level.shape() || level.embedding.shape() != level.shape()) {
      throw InputError(where + "tensor shapes disagree");
    }
    if (level.semantic.classes() != c) throw InputError(where + "semantic classes differ from class_kinds");
    if (i > 0 && half_shape(pyramid.levels[i - 1].shape()) != level.shape()) {
      throw InputError(where + "not half the size of the finer level");
    }
  }
}

// Seeds for one level: upsampled labels restricted to participating pixels;
// participating pixels seeded as background become unlabelled.
LabelMap level_seeds(const LabelMap* coarser, const std::vector<std::uint8_t>& participating, GridShape shape) {
  LabelMap seeds = coarser ? upsample_labels(*coarser, shape) : LabelMap(shape, kUnlabeled);
  for (std::size_t p = 0; p < shape.size(); ++p) {
    if (!participating[p]) {
      seeds[p] = kBackground;
    } else if (seeds[p] == kBackground) {
      seeds[p] = kUnlabeled;
    }
  }
  return seeds;
}

// Unlabels both ends of every grid edge whose affinity contradicts a shared seed.
void unlabel_stale_seeds(LabelMap& seeds, const AffinityMap& affinity, double threshold) {
  const auto [h, w] = seeds.shape();
  std::vector<std::uint8_t> stale(h * w, 0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Label l = seeds.at(y, x);
      if (!is_instance(l)) continue;
      const std::size_t p = y * w + x;
      if (x + 1 < w && seeds.at(y, x + 1) == l && affinity.right(y, x) <= threshold) stale[p] = stale[p + 1] = 1;
      if (y + 1 < h && seeds.at(y + 1, x) == l && affinity.down(y, x) <= threshold) stale[p] = stale[p + w] = 1;
    }
  }
  for (std::size_t p = 0; p < h * w; ++p) {
    if (stale[p]) seeds[p] = kUnlabeled;
  }
}

}  // namespace

LabelMap upsample_labels(const LabelMap& labels, GridShape target) {
  const GridShape src = labels.shape();
  if (!upsample_ok(src.height, target.height) || !upsample_ok(src.width, target.width)) {
    throw InputError("upsample target " + target.to_string() + " is not twice " + src.to_string());
  }
  const LabelMap up = upsample_nearest(labels, 2, target);
  LabelMap out = up;
  const auto [h, w] = target;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Label l = up.at(y, x);
      const bool boundary = (y > 0 && up.at(y - 1, x) != l) || (y + 1 < h && up.at(y + 1, x) != l) ||
                            (x > 0 && up.at(y, x - 1) != l) || (x + 1 < w && up.at(y, x + 1) != l);
      if (boundary) out.at(y, x) = kUnlabeled;
    }
  }
  return out;
}

std::vector<std::uint8_t> participation_mask(const PyramidLevel& level, const std::vector<ClassKind>& class_kinds,
                                             const CascadeConfig& config) {
  const SemanticMap& sem = level.semantic;
  if (sem.classes() != class_kinds.size()) throw InputError("class_kinds does not match the semantic map");
  const std::size_t n = level.shape().size();
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    if (config.background_mode == BackgroundMode::kArgmax) {
      mask[p] = class_kinds[sem.argmax(p)] == ClassKind::kInstance;
    } else {
      double instance_mass = 0.0;
      for (std::size_t c = 0; c < sem.classes(); ++c) {
        if (class_kinds[c] == ClassKind::kInstance) instance_mass += sem.at_index(c, p);
      }
      mask[p] = instance_mass > config.background_threshold;
    }
  }
  return mask;
}

std::vector<SegmentRecord> collect_segments(const LabelMap& labels, const PyramidLevel& level) {
  const GridShape shape = labels.shape();
  if (shape != level.shape()) throw InputError("labels and level differ in shape");
  const std::size_t c = level.semantic.classes();
  const std::size_t k = level.embedding.dim();
  std::unordered_map<Label, std::size_t> slot;
  std::vector<SegmentRecord> records;
  for (std::size_t p = 0; p < shape.size(); ++p) {
    const Label l = labels[p];
    if (!is_instance(l)) continue;
    auto [it, inserted] = slot.try_emplace(l, records.size());
    const int y = static_cast<int>(p / shape.width);
    const int x = static_cast<int>(p % shape.width);
    if (inserted) {
      SegmentRecord r;
      r.id = l;
      r.stats.bbox = BoundingBox::of_pixel(y, x);
      r.stats.semantic_sum.assign(c, 0.0);
      r.stats.embedding_sum.assign(k, 0.0);
      records.push_back(std::move(r));
    }
    Segment& s = records[it->second].stats;
    ++s.pixel_count;
    s.bbox.include(y, x);
    for (std::size_t j = 0; j < c; ++j) s.semantic_sum[j] += level.semantic.at_index(j, p);
    for (std::size_t j = 0; j < k; ++j) s.embedding_sum[j] += level.embedding.at_index(j, p);
  }
  std::sort(records.begin(), records.end(), [](const SegmentRecord& a, const SegmentRecord& b) { return a.id < b.id; });
  return records;
}

CascadeResult cascade_gaec(const AffinityPyramid& pyramid, const CascadeConfig& config) {
  check_structure(pyramid);
  CascadeResult result;
  const std::size_t num_levels = pyramid.num_levels();
  LabelMap previous;

  for (std::size_t li = num_levels; li-- > 0;) {
    const PyramidLevel& level = pyramid.levels[li];
    const GridShape shape = level.shape();
    LevelReport report;
    report.level = li + 1;

    const std::vector<std::uint8_t> participating = participation_mask(level, pyramid.class_kinds, config);
    const bool coarsest = li + 1 == num_levels;
    LabelMap seeds = level_seeds(coarsest ? nullptr : &previous, participating, shape);

    if (li == 0 && config.use_gas && !coarsest) {
      report.used_gas = true;
      if (config.split_stale_seeds) unlabel_stale_seeds(seeds, level.affinity, config.threshold);
      previous = canonicalize(gas(seeds, level.affinity, config.threshold, config.seed));
      result.levels.push_back(report);
      break;
    }

    PixelGraphOptions options;
    if (config.split_stale_seeds) options.split_seeds_at = config.threshold;
    PixelGraph pg = build_pixel_graph(level, seeds, options);
    report.vertices = pg.graph.live_vertex_count();
    report.gaec_contractions = gaec(pg.graph, config.threshold);
    report.segments_after_gaec = pg.graph.live_vertex_count();

    if (!config.use_pa_gaec) {
      previous = pg.labels();
      report.segments_after_pa = report.segments_after_gaec;
    } else {
      const std::vector<VertexId> live = pg.graph.live_vertices();
      const std::vector<Segment> segments = pg.segments(live);
      PaGaecOptions pa;
      pa.threshold = config.threshold;
      pa.beta = config.beta;
      pa.full_pairs = config.pa_full_pairs;
      const std::vector<std::size_t> part = pa_gaec(segments, pa);

      std::vector<std::size_t> part_of_vertex(pg.graph.vertex_capacity(), 0);
      for (std::size_t i = 0; i < live.size(); ++i) part_of_vertex[live[i]] = part[i];
      const std::vector<VertexId> root = pg.graph.representatives();
      LabelMap labels(shape, kBackground);
      for (std::size_t p = 0; p < shape.size(); ++p) {
        const VertexId v = pg.pixel_vertex[p];
        if (v != kNoVertex) labels[p] = static_cast<Label>(part_of_vertex[root[v]] + 1);
      }
      previous = canonicalize(labels);
      report.segments_after_pa = part.empty() ? 0 : *std::max_element(part.begin(), part.end()) + 1;
    }
    result.levels.push_back(report);
  }

  result.labels = std::move(previous);
  result.segments = collect_segments(result.labels, pyramid.levels.front());
  return result;
}

std::vector<ScoredInstance> render_instances(const LabelMap& labels, const std::vector<SegmentRecord>& segments,
                                             const std::vector<ClassKind>& class_kinds, GridShape input_shape,
                                             const RenderOptions& options) {
  const GridShape src = labels.shape();
  const std::size_t s = options.scale;
  auto fits = [s](std::size_t level, std::size_t input) { return input <= level * s && input + s > level * s; };
  if (s == 0 || !fits(src.height, input_shape.height) || !fits(src.width, input_shape.width)) {
    throw InputError("input shape " + input_shape.to_string() + " does not match level " + src.to_string() +
                     " at scale " + std::to_string(s));
  }

  std::unordered_map<Label, const SegmentRecord*> by_id;
  for (const SegmentRecord& r : segments) by_id.emplace(r.id, &r);

  std::vector<ScoredInstance> out;
  for (auto& [id, mask] : masks_by_label(upsample_nearest(labels, s, input_shape))) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) continue;
    const Segment& stats = it->second->stats;
    if (stats.pixel_count < options.min_pixels) continue;

    std::size_t best_class = class_kinds.size();
    double best = -1.0;
    for (std::size_t c = 0; c < class_kinds.size() && c < stats.semantic_sum.size(); ++c) {
      if (class_kinds[c] != ClassKind::kInstance) continue;
      const double p = stats.semantic_sum[c] / static_cast<double>(stats.pixel_count);
      if (p > best) {
        best = p;
        best_class = c;
      }
    }
    if (best_class == class_kinds.size()) continue;

    ScoredInstance inst;
    inst.id = id;
    inst.class_id = best_class;
    inst.score = best;
    inst.level_pixels = stats.pixel_count;
    inst.mask = std::move(mask);
    out.push_back(std::move(inst));
  }
  return out;
}

LabelMap instance_label_image(const std::vector<ScoredInstance>& instances, GridShape input_shape) {
  LabelMap out(input_shape, kBackground);
  for (const ScoredInstance& inst : instances) {
    if (inst.mask.shape() != input_shape) throw InputError("instance mask does not match the image shape");
    for (const Run& r : inst.mask.runs()) {
      std::fill_n(out.labels().begin() + static_cast<std::ptrdiff_t>(r.start), r.length, inst.id);
    }
  }
  return out;
}

}  // namespace affcut
