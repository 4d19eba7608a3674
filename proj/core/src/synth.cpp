#include "affcut/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "affcut/cascade.hpp"
#include "affcut/error.hpp"
#include "affcut/position_aware.hpp"

namespace affcut {

namespace {

constexpr std::size_t kMinVisiblePixels = 24;
constexpr std::size_t kMinPartPixels = 12;
constexpr std::size_t kMinSeedPixels = 4;
constexpr std::size_t kPlacementAttempts = 60;
constexpr std::size_t kOccluderAttempts = 30;
// Occluded halves must stay close enough to be merged by position-aware merging.
constexpr double kMinPartDamping = 0.6;
constexpr double kEmbeddingSeparationSq = 4.0;

struct Box {
  int y0, x0, h, w;
};

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<std::size_t> rasterize(ShapeKind kind, const Box& box, GridShape canvas, Rng& rng) {
  std::vector<std::size_t> pixels;
  const double cy = box.y0 + 0.5 * (box.h - 1);
  const double cx = box.x0 + 0.5 * (box.w - 1);
  const double ry = 0.5 * box.h;
  const double rx = 0.5 * box.w;

  std::vector<std::pair<double, double>> polygon;
  if (kind == ShapeKind::kPolygon) {
    const int corners = uniform_int(rng, 5, 8);
    std::vector<double> angles(static_cast<std::size_t>(corners));
    for (double& a : angles) a = uniform_real(rng, 0.0, 2.0 * std::numbers::pi);
    std::sort(angles.begin(), angles.end());
    for (double a : angles) {
      const double r = uniform_real(rng, 0.8, 1.0);
      polygon.emplace_back(cy + r * ry * std::sin(a), cx + r * rx * std::cos(a));
    }
  }
  auto inside_polygon = [&](double y, double x) {
    bool inside = false;
    for (std::size_t i = 0, j = polygon.size() - 1; i < polygon.size(); j = i++) {
      const auto [yi, xi] = polygon[i];
      const auto [yj, xj] = polygon[j];
      if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) inside = !inside;
    }
    return inside;
  };

  for (int y = box.y0; y < box.y0 + box.h; ++y) {
    for (int x = box.x0; x < box.x0 + box.w; ++x) {
      bool in = true;
      if (kind == ShapeKind::kEllipse) {
        const double dy = (y - cy) / ry;
        const double dx = (x - cx) / rx;
        in = dy * dy + dx * dx <= 1.0;
      } else if (kind == ShapeKind::kPolygon) {
        in = inside_polygon(y, x);
      }
      if (in) pixels.push_back(canvas.index(static_cast<std::size_t>(y), static_cast<std::size_t>(x)));
    }
  }
  return pixels;
}

struct ComponentStats {
  std::size_t components = 0;
  std::size_t visible = 0;
  std::vector<Segment> parts;
};

// Connected pieces of every instance label.
std::map<Label, ComponentStats> component_stats(const LabelMap& canvas) {
  const LabelMap comps = connected_components(canvas);
  std::map<Label, Label> owner;
  std::map<Label, ComponentStats> stats;
  std::map<Label, std::size_t> part_slot;
  const std::size_t w = canvas.shape().width;
  for (std::size_t p = 0; p < canvas.shape().size(); ++p) {
    const Label l = canvas[p];
    if (!is_instance(l)) continue;
    ComponentStats& s = stats[l];
    ++s.visible;
    const Label comp = comps[p];
    auto [it, inserted] = part_slot.try_emplace(comp, s.parts.size());
    const int y = static_cast<int>(p / w);
    const int x = static_cast<int>(p % w);
    if (inserted) {
      ++s.components;
      Segment seg;
      seg.bbox = BoundingBox::of_pixel(y, x);
      s.parts.push_back(seg);
    }
    Segment& seg = s.parts[it->second];
    ++seg.pixel_count;
    seg.bbox.include(y, x);
  }
  return stats;
}

// Coarse-to-fine seeding must see every instance part: each 4-connected part
// keeps a few seed pixels after upsampling the next-coarser level, and no seed
// carries another instance's label.
bool survives_coarsening(const LabelMap& canvas) {
  const LabelMap parts = connected_components(canvas);
  const LabelMap seeds = upsample_labels(downsample_majority(canvas), canvas.shape());
  std::vector<std::size_t> kept(static_cast<std::size_t>(std::max<Label>(parts.max_label(), 0)) + 1, 0);
  for (std::size_t p = 0; p < canvas.shape().size(); ++p) {
    const Label seed = seeds[p];
    if (!is_instance(seed) || !is_instance(canvas[p])) continue;
    if (seed != canvas[p]) return false;
    ++kept[static_cast<std::size_t>(parts[p])];
  }
  for (std::size_t p = 0; p < canvas.shape().size(); ++p) {
    if (is_instance(parts[p]) && kept[static_cast<std::size_t>(parts[p])] < kMinSeedPixels) return false;
  }
  return true;
}

std::vector<std::vector<double>> embedding_centers(std::size_t count, std::size_t dim, Rng& rng) {
  std::vector<std::vector<double>> centers;
  const double radius = 2.0 + 2.0 * static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> c(dim, 0.0);
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      for (double& v : c) v = uniform_real(rng, -radius, radius);
      placed = std::all_of(centers.begin(), centers.end(), [&](const std::vector<double>& o) {
        double d = 0.0;
        for (std::size_t j = 0; j < dim; ++j) d += (c[j] - o[j]) * (c[j] - o[j]);
        return d >= kEmbeddingSeparationSq;
      });
    }
    if (!placed) {
      std::fill(c.begin(), c.end(), 0.0);
      c[0] = 2.5 * static_cast<double>(i);
    }
    centers.push_back(std::move(c));
  }
  return centers;
}

PyramidLevel render_level(const LabelMap& truth, const std::vector<std::size_t>& instance_class,
                          const std::vector<std::vector<double>>& centers, const SceneSpec& spec, Rng& rng) {
  const GridShape shape = truth.shape();
  const NoiseSpec& noise = spec.noise;
  PyramidLevel level{AffinityMap(shape), SemanticMap(shape, spec.classes), EmbeddingMap(shape, spec.embedding_dim)};

  std::bernoulli_distribution flip(noise.flip_rate);
  std::normal_distribution<double> jitter(0.0, noise.jitter_sigma > 0.0 ? noise.jitter_sigma : 1.0);
  auto noisy = [&](bool same) {
    double a = same ? 1.0 : 0.0;
    if (noise.flip_rate > 0.0 && flip(rng)) a = 1.0 - a;
    if (noise.jitter_sigma > 0.0) a = std::clamp(a + jitter(rng), 0.0, 1.0);
    return static_cast<float>(a);
  };
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      if (y + 1 < shape.height) level.affinity.set_vertical(y, x, noisy(truth.at(y, x) == truth.at(y + 1, x)));
      if (x + 1 < shape.width) level.affinity.set_horizontal(y, x, noisy(truth.at(y, x) == truth.at(y, x + 1)));
    }
  }

  const double eps = noise.semantic_smoothing;
  const float off = static_cast<float>(eps / static_cast<double>(spec.classes));
  const float on = static_cast<float>(1.0 - eps + eps / static_cast<double>(spec.classes));
  std::normal_distribution<double> emb_noise(0.0, noise.embedding_sigma > 0.0 ? noise.embedding_sigma : 1.0);
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      const Label l = truth.at(y, x);
      const std::size_t cls = instance_class[static_cast<std::size_t>(l)];
      for (std::size_t c = 0; c < spec.classes; ++c) level.semantic.at(c, y, x) = c == cls ? on : off;
      for (std::size_t j = 0; j < spec.embedding_dim; ++j) {
        double v = is_instance(l) ? centers[static_cast<std::size_t>(l) - 1][j] : 0.0;
        if (noise.embedding_sigma > 0.0) v += emb_noise(rng);
        level.embedding.at(j, y, x) = static_cast<float>(v);
      }
    }
  }
  return level;
}

}  // namespace

void SceneSpec::validate() const {
  auto probability = [](double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(what) + " must lie in [0,1]");
  };
  if (shape.height == 0 || shape.width == 0) throw InputError("scene shape must be non-empty");
  if (levels == 0) throw InputError("scene needs at least one pyramid level");
  if (min_instances > max_instances) throw InputError("min_instances exceeds max_instances");
  if (shape_kinds.empty()) throw InputError("no shape kinds enabled");
  if (background_classes == 0 || classes <= background_classes) {
    throw InputError("need at least one background and one instance class");
  }
  if (embedding_dim == 0) throw InputError("embedding_dim must be positive");
  probability(occluder_probability, "occluder_probability");
  probability(noise.flip_rate, "flip_rate");
  probability(noise.semantic_smoothing, "semantic_smoothing");
  if (!(noise.jitter_sigma >= 0.0) || !(noise.embedding_sigma >= 0.0)) throw InputError("noise sigmas must be >= 0");
}

LabelMap downsample_majority(const LabelMap& labels) {
  const GridShape src = labels.shape();
  const GridShape dst = half_shape(src);
  LabelMap out(dst);
  for (std::size_t y = 0; y < dst.height; ++y) {
    for (std::size_t x = 0; x < dst.width; ++x) {
      std::array<Label, 4> kids{};
      std::size_t n = 0;
      for (std::size_t dy = 0; dy < 2; ++dy) {
        for (std::size_t dx = 0; dx < 2; ++dx) {
          const std::size_t sy = 2 * y + dy;
          const std::size_t sx = 2 * x + dx;
          if (sy < src.height && sx < src.width) kids[n++] = labels.at(sy, sx);
        }
      }
      std::sort(kids.begin(), kids.begin() + static_cast<std::ptrdiff_t>(n));
      Label best = kids[0];
      std::size_t best_count = 0;
      for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && kids[j] == kids[i]) ++j;
        if (j - i > best_count) {
          best_count = j - i;
          best = kids[i];
        }
        i = j;
      }
      out.at(y, x) = best;
    }
  }
  return out;
}

SceneSpec moderate_noise_spec(GridShape shape, std::uint64_t seed) {
  SceneSpec spec;
  spec.shape = shape;
  spec.seed = seed;
  spec.noise.jitter_sigma = 0.05;
  return spec;
}

GroundTruthScene SyntheticScene::ground_truth(std::size_t level_index) const {
  if (level_index >= level_truth.size()) throw InputError("no such pyramid level");
  return make_ground_truth(level_truth[level_index], instance_class, spec.classes);
}

std::vector<GroundTruthInstance> SyntheticScene::truth_instances() const {
  if (truth.shape().size() == 0 || truth.labels().empty()) {
    throw InputError("scene was generated without input-resolution truth");
  }
  return truth_instances_from_labels(truth, instance_class);
}

SyntheticScene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  const GridShape base{(spec.shape.height + 3) / 4, (spec.shape.width + 3) / 4};
  const int short_side = static_cast<int>(std::min(base.height, base.width));
  const int ext_min = std::max(6, static_cast<int>(std::lround(0.08 * short_side)));
  const int ext_max = std::max(ext_min + 2, static_cast<int>(std::lround(0.35 * short_side)));
  if (spec.max_instances > 0 && ext_min > short_side) {
    throw InputError("scene " + spec.shape.to_string() + " is too small for instances of extent " +
                     std::to_string(ext_min * 4));
  }

  SyntheticScene scene;
  scene.spec = spec;
  scene.instance_class.push_back(0);

  LabelMap canvas(base, kBackground);
  std::vector<std::size_t> areas{0};
  const std::size_t target = static_cast<std::size_t>(
      uniform_int(rng, static_cast<int>(spec.min_instances), static_cast<int>(spec.max_instances)));

  for (std::size_t i = 0; i < target; ++i) {
    const Label id = static_cast<Label>(scene.instances.size() + 1);
    for (std::size_t attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      const ShapeKind kind = spec.shape_kinds[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(spec.shape_kinds.size()) - 1))];
      Box box;
      box.h = std::min(uniform_int(rng, ext_min, ext_max), static_cast<int>(base.height));
      box.w = std::min(uniform_int(rng, ext_min, ext_max), static_cast<int>(base.width));
      box.y0 = uniform_int(rng, 0, static_cast<int>(base.height) - box.h);
      box.x0 = uniform_int(rng, 0, static_cast<int>(base.width) - box.w);
      const std::vector<std::size_t> pixels = rasterize(kind, box, base, rng);
      if (pixels.size() < kMinVisiblePixels) continue;

      LabelMap trial = canvas;
      for (std::size_t p : pixels) trial[p] = id;
      const auto stats = component_stats(trial);
      bool ok = true;
      for (Label other = 1; other <= id && ok; ++other) {
        const auto it = stats.find(other);
        const std::size_t area = other == id ? pixels.size() : areas[static_cast<std::size_t>(other)];
        ok = it != stats.end() && it->second.components == 1 && it->second.visible >= kMinVisiblePixels &&
             2 * it->second.visible >= area;
      }
      if (!ok || !survives_coarsening(trial)) continue;

      canvas = std::move(trial);
      areas.push_back(pixels.size());
      SyntheticInstance inst;
      inst.id = id;
      inst.class_id = static_cast<std::size_t>(
          uniform_int(rng, static_cast<int>(spec.background_classes), static_cast<int>(spec.classes) - 1));
      scene.instances.push_back(inst);
      scene.instance_class.push_back(inst.class_id);
      break;
    }
  }
  if (scene.instances.size() < spec.min_instances) {
    throw InputError("could not place " + std::to_string(spec.min_instances) + " instances in a " +
                     spec.shape.to_string() + " scene");
  }

  // Background strips that cut single instances into two nearby halves.
  std::bernoulli_distribution occlude(spec.occluder_probability);
  for (SyntheticInstance& inst : scene.instances) {
    if (!occlude(rng)) continue;
    for (std::size_t attempt = 0; attempt < kOccluderAttempts; ++attempt) {
      const auto stats = component_stats(canvas);
      const BoundingBox bb = stats.at(inst.id).parts.front().bbox;
      const bool vertical = uniform_int(rng, 0, 1) == 0;
      const int extent = vertical ? bb.x_max - bb.x_min + 1 : bb.y_max - bb.y_min + 1;
      const int lo_edge = vertical ? bb.x_min : bb.y_min;
      const int width = uniform_int(rng, 2, std::max(2, extent / 5));
      const int first = lo_edge + extent / 4;
      const int last = lo_edge + extent - extent / 4 - width;
      if (last < first) continue;
      const int start = uniform_int(rng, first, last);

      LabelMap trial = canvas;
      const int span_lo = (vertical ? bb.y_min : bb.x_min) - 1;
      const int span_hi = (vertical ? bb.y_max : bb.x_max) + 1;
      for (int a = span_lo; a <= span_hi; ++a) {
        for (int b = start; b < start + width; ++b) {
          const int y = vertical ? a : b;
          const int x = vertical ? b : a;
          if (y < 0 || x < 0 || y >= static_cast<int>(base.height) || x >= static_cast<int>(base.width)) continue;
          trial.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = kBackground;
        }
      }
      const auto after = component_stats(trial);
      bool ok = true;
      for (const SyntheticInstance& other : scene.instances) {
        const auto it = after.find(other.id);
        if (it == after.end()) {
          ok = false;
          break;
        }
        const ComponentStats& s = it->second;
        if (other.id == inst.id) {
          ok = s.components == 2 && s.parts[0].pixel_count >= kMinPartPixels &&
               s.parts[1].pixel_count >= kMinPartPixels &&
               damping(s.parts[0], s.parts[1], kDefaultBeta) >= kMinPartDamping;
        } else {
          const std::size_t expected = other.occluded ? 2 : 1;
          ok = s.components == expected && s.visible >= kMinVisiblePixels &&
               2 * s.visible >= areas[static_cast<std::size_t>(other.id)];
        }
        if (!ok) break;
      }
      if (!ok || !survives_coarsening(trial)) continue;
      // The halves must also be mergeable where they are first seen apart.
      if (const auto coarse = component_stats(downsample_majority(trial)); coarse.contains(inst.id)) {
        const ComponentStats& c = coarse.at(inst.id);
        if (c.components == 2 && damping(c.parts[0], c.parts[1], kDefaultBeta) < kMinPartDamping) continue;
      }
      canvas = std::move(trial);
      inst.occluded = true;
      break;
    }
  }

  const auto centers = embedding_centers(scene.instances.size(), spec.embedding_dim, rng);
  for (SyntheticInstance& inst : scene.instances) inst.embedding_center = centers[static_cast<std::size_t>(inst.id) - 1];

  scene.level_truth.push_back(canvas);
  for (std::size_t l = 1; l < spec.levels; ++l) scene.level_truth.push_back(downsample_majority(scene.level_truth.back()));

  scene.pyramid.class_kinds.assign(spec.classes, ClassKind::kInstance);
  for (std::size_t c = 0; c < spec.background_classes; ++c) scene.pyramid.class_kinds[c] = ClassKind::kBackground;
  scene.pyramid.input_shape = spec.shape;
  for (const LabelMap& truth : scene.level_truth) {
    scene.pyramid.levels.push_back(render_level(truth, scene.instance_class, centers, spec, rng));
  }
  if (spec.with_full_resolution_truth) scene.truth = upsample_nearest(canvas, 4, spec.shape);
  return scene;
}

}  // namespace affcut
