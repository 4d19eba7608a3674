#pragma once

#include <cstdint>

#include "affcut/grid.hpp"
#include "affcut/label_map.hpp"

namespace affcut {

/// Greedy association: sweeps the unlabelled pixels in a seeded random order
/// and gives each one the label of its highest-affinity labelled neighbour
/// when that affinity exceeds `threshold`. Sweeps repeat until nothing
/// changes; whatever is still unlabelled becomes background.
LabelMap gas(const LabelMap& labels, const AffinityMap& affinity, double threshold, std::uint64_t seed);

}  // namespace affcut
