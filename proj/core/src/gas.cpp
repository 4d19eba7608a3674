#include "affcut/gas.hpp"

#include <algorithm>
#include <random>

#include "affcut/error.hpp"

namespace affcut {

LabelMap gas(const LabelMap& labels, const AffinityMap& affinity, double threshold, std::uint64_t seed) {
  const GridShape shape = labels.shape();
  if (affinity.shape() != shape) {
    throw InputError("GAS: label map " + shape.to_string() + " vs affinity " + affinity.shape().to_string());
  }
  LabelMap out = labels;
  std::vector<std::size_t> pending;
  for (std::size_t p = 0; p < shape.size(); ++p) {
    if (out[p] == kUnlabeled) pending.push_back(p);
  }

  std::mt19937_64 rng(seed);
  const std::size_t w = shape.width;
  bool changed = true;
  while (!pending.empty() && changed) {
    changed = false;
    std::shuffle(pending.begin(), pending.end(), rng);
    std::vector<std::size_t> still_pending;
    for (std::size_t p : pending) {
      const std::size_t y = p / w;
      const std::size_t x = p % w;
      // Highest-affinity neighbour among those already carrying an instance label.
      Label best_label = kUnlabeled;
      float best = -1.0f;
      auto consider = [&](std::size_t q, float a) {
        if (is_instance(out[q]) && a > best) {
          best = a;
          best_label = out[q];
        }
      };
      if (y > 0) consider(p - w, affinity.at(Direction::kUp, y, x));
      if (y + 1 < shape.height) consider(p + w, affinity.down(y, x));
      if (x > 0) consider(p - 1, affinity.at(Direction::kLeft, y, x));
      if (x + 1 < w) consider(p + 1, affinity.right(y, x));

      if (best_label != kUnlabeled && best > threshold) {
        out[p] = best_label;
        changed = true;
      } else {
        still_pending.push_back(p);
      }
    }
    pending.swap(still_pending);
  }
  for (std::size_t p : pending) out[p] = kBackground;
  return out;
}

}  // namespace affcut
