#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"

namespace affcut {

/// exp(-alpha) = 1/2, so squared distances above 1 score below 0.5.
inline const double kDefaultAlpha = std::log(2.0);

/// Probabilities are clipped to [kProbabilityEpsilon, 1 - kProbabilityEpsilon] inside logs.
inline constexpr double kProbabilityEpsilon = 1e-7;

/// Gaussian embedding affinity exp(-alpha * |a - b|^2). Throws InputError on
/// mismatched dimensions.
double phi(std::span<const double> a, std::span<const double> b, double alpha = kDefaultAlpha);

/// d phi / d a. The gradient w.r.t. b is the negation.
std::vector<double> phi_gradient(std::span<const double> a, std::span<const double> b,
                                 double alpha = kDefaultAlpha);

/// Binary cross-entropy of prediction p against target t, with p clipped.
double binary_cross_entropy(double target, double prediction);

/// Dense training targets derived from an instance label map.
struct GroundTruthScene {
  LabelMap labels;                          ///< kBackground or instance id
  std::vector<std::size_t> instance_class;  ///< class per label id; index 0 is the background class
  SemanticMap semantic;                     ///< one-hot class targets
  AffinityMap affinity;                     ///< 1 where both endpoints carry the same label
  std::vector<std::uint8_t> boundary;       ///< pixels with a differently-labelled 4-neighbour

  std::size_t instance_count() const;
};

/// `instance_class[id]` gives the class of each label id; entry 0 is the background class.
GroundTruthScene make_ground_truth(const LabelMap& labels, std::vector<std::size_t> instance_class,
                                   std::size_t num_classes);

struct GroupingLosses {
  double push = 0.0;  ///< between-instance term
  double pull = 0.0;  ///< within-instance term
  bool push_defined = false;  ///< false with fewer than two instances
  bool pull_defined = false;  ///< false with no instances
};

GroupingLosses grouping_losses(const EmbeddingMap& embeddings, const GroundTruthScene& gt,
                               double alpha = kDefaultAlpha);

/// Analytic gradients of the push and pull losses w.r.t. every embedding
/// value, in EmbeddingMap layout (k x h x w).
struct GroupingGradients {
  std::vector<double> push;
  std::vector<double> pull;
};

GroupingGradients grouping_loss_gradients(const EmbeddingMap& embeddings, const GroundTruthScene& gt,
                                          double alpha = kDefaultAlpha);

struct SemanticAffinityLosses {
  double semantic = 0.0;
  double boundary = 0.0;  ///< affinity BCE over boundary pixels
  double solid = 0.0;     ///< affinity BCE over non-boundary pixels
  bool boundary_defined = false;
  bool solid_defined = false;
};

/// `pixel_weights` empty means weight 1 everywhere; otherwise one strictly
/// positive weight per pixel.
SemanticAffinityLosses semantic_affinity_losses(const SemanticMap& semantic, const AffinityMap& affinity,
                                                const GroundTruthScene& gt,
                                                std::span<const double> pixel_weights = {});

struct LossWeights {
  double semantic = 0.0;
  double push = 0.0;
  double pull = 0.0;
  double boundary = 0.0;
  double solid = 0.0;
};

struct LevelLosses {
  GroupingLosses grouping;
  SemanticAffinityLosses semantic_affinity;
};

/// Weighted sum over levels. Throws InputError on length mismatch or
/// negative/non-finite weights.
double total_loss(std::span<const LevelLosses> losses, std::span<const LossWeights> weights);

}  // namespace affcut
