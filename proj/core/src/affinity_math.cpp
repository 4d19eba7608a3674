#include "affcut/affinity_math.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "affcut/error.hpp"

namespace affcut {

namespace {

double clip(double p) { return std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon); }
bool clipped(double p) { return p < kProbabilityEpsilon || p > 1.0 - kProbabilityEpsilon; }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("embedding dimensions differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

// Per-instance pixel lists and mean embeddings.
struct InstanceGroups {
  std::vector<std::vector<std::size_t>> pixels;
  std::vector<std::vector<double>> means;
};

InstanceGroups group_instances(const EmbeddingMap& emb, const LabelMap& labels) {
  if (emb.shape() != labels.shape()) throw InputError("embeddings and ground truth differ in shape");
  std::map<Label, std::size_t> slot;
  InstanceGroups g;
  for (std::size_t p = 0; p < labels.shape().size(); ++p) {
    if (!is_instance(labels[p])) continue;
    auto [it, inserted] = slot.try_emplace(labels[p], g.pixels.size());
    if (inserted) g.pixels.emplace_back();
    g.pixels[it->second].push_back(p);
  }
  const std::size_t k = emb.dim();
  for (const auto& px : g.pixels) {
    std::vector<double> mean(k, 0.0);
    for (std::size_t p : px) {
      for (std::size_t j = 0; j < k; ++j) mean[j] += emb.at_index(j, p);
    }
    for (double& v : mean) v /= static_cast<double>(px.size());
    g.means.push_back(std::move(mean));
  }
  return g;
}

std::vector<double> pixel_embedding(const EmbeddingMap& emb, std::size_t p) {
  std::vector<double> x(emb.dim());
  for (std::size_t j = 0; j < emb.dim(); ++j) x[j] = emb.at_index(j, p);
  return x;
}

}  // namespace

double phi(std::span<const double> a, std::span<const double> b, double alpha) {
  return std::exp(-alpha * squared_distance(a, b));
}

std::vector<double> phi_gradient(std::span<const double> a, std::span<const double> b, double alpha) {
  const double value = phi(a, b, alpha);
  std::vector<double> g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = -2.0 * alpha * value * (a[i] - b[i]);
  return g;
}

double binary_cross_entropy(double target, double prediction) {
  const double p = clip(prediction);
  return -target * std::log(p) - (1.0 - target) * std::log(1.0 - p);
}

std::size_t GroundTruthScene::instance_count() const {
  std::vector<Label> ids;
  for (Label l : labels.labels()) {
    if (is_instance(l)) ids.push_back(l);
  }
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

GroundTruthScene make_ground_truth(const LabelMap& labels, std::vector<std::size_t> instance_class,
                                   std::size_t num_classes) {
  const GridShape shape = labels.shape();
  GroundTruthScene gt;
  gt.labels = labels;
  gt.semantic = SemanticMap(shape, num_classes);
  gt.affinity = AffinityMap(shape);
  for (std::size_t p = 0; p < shape.size(); ++p) {
    const Label l = labels[p];
    if (l < 0) throw InputError("ground truth contains unlabelled pixels");
    if (static_cast<std::size_t>(l) >= instance_class.size()) {
      throw InputError("no class given for instance " + std::to_string(l));
    }
    const std::size_t c = instance_class[static_cast<std::size_t>(l)];
    if (c >= num_classes) throw InputError("class " + std::to_string(c) + " out of range");
    gt.semantic.at(c, p / shape.width, p % shape.width) = 1.0f;
  }
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      if (y + 1 < shape.height) gt.affinity.set_vertical(y, x, labels.at(y, x) == labels.at(y + 1, x) ? 1.0f : 0.0f);
      if (x + 1 < shape.width) gt.affinity.set_horizontal(y, x, labels.at(y, x) == labels.at(y, x + 1) ? 1.0f : 0.0f);
    }
  }
  gt.boundary = boundary_mask(labels);
  gt.instance_class = std::move(instance_class);
  return gt;
}

GroupingLosses grouping_losses(const EmbeddingMap& embeddings, const GroundTruthScene& gt, double alpha) {
  const InstanceGroups g = group_instances(embeddings, gt.labels);
  const std::size_t n = g.means.size();
  GroupingLosses out;
  if (n >= 2) {
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) sum += 2.0 * binary_cross_entropy(0.0, phi(g.means[a], g.means[b], alpha));
    }
    out.push = sum / static_cast<double>(n * n - n);
    out.push_defined = true;
  }
  if (n >= 1) {
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      double inner = 0.0;
      for (std::size_t p : g.pixels[s]) {
        inner += binary_cross_entropy(1.0, phi(g.means[s], pixel_embedding(embeddings, p), alpha));
      }
      sum += inner / static_cast<double>(g.pixels[s].size());
    }
    out.pull = sum / static_cast<double>(n);
    out.pull_defined = true;
  }
  return out;
}

GroupingGradients grouping_loss_gradients(const EmbeddingMap& embeddings, const GroundTruthScene& gt, double alpha) {
  const InstanceGroups g = group_instances(embeddings, gt.labels);
  const std::size_t n = g.means.size();
  const std::size_t k = embeddings.dim();
  const std::size_t plane = embeddings.shape().size();
  GroupingGradients out{std::vector<double>(k * plane, 0.0), std::vector<double>(k * plane, 0.0)};

  if (n >= 2) {
    const double norm = static_cast<double>(n * n - n);
    for (std::size_t s = 0; s < n; ++s) {
      // d push / d mean_s, then spread evenly over the instance's pixels.
      std::vector<double> grad(k, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        if (t == s) continue;
        const double value = phi(g.means[s], g.means[t], alpha);
        if (clipped(value)) continue;
        const double dbce = 1.0 / (1.0 - value);
        for (std::size_t j = 0; j < k; ++j) {
          grad[j] += 2.0 * dbce * (-2.0 * alpha * value * (g.means[s][j] - g.means[t][j])) / norm;
        }
      }
      const double share = 1.0 / static_cast<double>(g.pixels[s].size());
      for (std::size_t p : g.pixels[s]) {
        for (std::size_t j = 0; j < k; ++j) out.push[j * plane + p] = grad[j] * share;
      }
    }
  }

  if (n >= 1) {
    for (std::size_t s = 0; s < n; ++s) {
      const auto& px = g.pixels[s];
      const double weight = 1.0 / (static_cast<double>(n) * static_cast<double>(px.size()));
      // through_mean accumulates d/d mean_s, which every pixel receives / N_S.
      std::vector<double> through_mean(k, 0.0);
      std::vector<std::vector<double>> direct(px.size());
      for (std::size_t i = 0; i < px.size(); ++i) {
        const std::vector<double> x = pixel_embedding(embeddings, px[i]);
        const double value = phi(g.means[s], x, alpha);
        direct[i].assign(k, 0.0);
        if (clipped(value)) continue;
        const double dbce = -1.0 / value;
        for (std::size_t j = 0; j < k; ++j) {
          const double dphi_dmean = -2.0 * alpha * value * (g.means[s][j] - x[j]);
          through_mean[j] += weight * dbce * dphi_dmean;
          direct[i][j] = -weight * dbce * dphi_dmean;
        }
      }
      const double share = 1.0 / static_cast<double>(px.size());
      for (std::size_t i = 0; i < px.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) out.pull[j * plane + px[i]] = direct[i][j] + through_mean[j] * share;
      }
    }
  }
  return out;
}

SemanticAffinityLosses semantic_affinity_losses(const SemanticMap& semantic, const AffinityMap& affinity,
                                                const GroundTruthScene& gt, std::span<const double> pixel_weights) {
  const GridShape shape = gt.labels.shape();
  if (semantic.shape() != shape || affinity.shape() != shape || gt.semantic.shape() != shape) {
    throw InputError("loss inputs disagree in shape");
  }
  if (semantic.classes() != gt.semantic.classes()) throw InputError("prediction and target class counts differ");
  const std::size_t n = shape.size();
  if (!pixel_weights.empty() && pixel_weights.size() != n) throw InputError("need one weight per pixel");
  for (double w : pixel_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("pixel weights must be strictly positive");
  }

  SemanticAffinityLosses out;
  double sem = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < semantic.classes(); ++c) {
      const double q = gt.semantic.at_index(c, p);
      if (q != 0.0) sem -= q * std::log(clip(semantic.at_index(c, p)));
    }
  }
  out.semantic = sem / static_cast<double>(n);

  double boundary_sum = 0.0;
  double solid_sum = 0.0;
  std::size_t boundary_count = 0;
  std::size_t solid_count = 0;
  const auto pred = affinity.values();
  const auto target = gt.affinity.values();
  for (std::size_t p = 0; p < n; ++p) {
    double term = 0.0;
    for (std::size_t d = 0; d < kNumDirections; ++d) {
      term += binary_cross_entropy(target[d * n + p], pred[d * n + p]);
    }
    term *= pixel_weights.empty() ? 1.0 : pixel_weights[p];
    if (gt.boundary[p]) {
      boundary_sum += term;
      ++boundary_count;
    } else {
      solid_sum += term;
      ++solid_count;
    }
  }
  if (boundary_count > 0) {
    out.boundary = boundary_sum / static_cast<double>(boundary_count);
    out.boundary_defined = true;
  }
  if (solid_count > 0) {
    out.solid = solid_sum / static_cast<double>(solid_count);
    out.solid_defined = true;
  }
  return out;
}

double total_loss(std::span<const LevelLosses> losses, std::span<const LossWeights> weights) {
  if (losses.size() != weights.size()) throw InputError("one set of loss weights per level is required");
  double total = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    const LossWeights& w = weights[i];
    for (double v : {w.semantic, w.push, w.pull, w.boundary, w.solid}) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("loss weights must be finite and non-negative");
    }
    const LevelLosses& l = losses[i];
    total += w.semantic * l.semantic_affinity.semantic + w.push * l.grouping.push + w.pull * l.grouping.pull +
             w.boundary * l.semantic_affinity.boundary + w.solid * l.semantic_affinity.solid;
  }
  return total;
}

}  // namespace affcut
