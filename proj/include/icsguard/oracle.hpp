#pragma once

#include <cstddef>

#include "icsguard/metric.hpp"
#include "icsguard/model.hpp"

namespace icsguard {

/// Reference optimum by enumerating every subset of atomic nodes. Among
/// equal-cost optima the one with fewest nodes wins, then the
/// lexicographically smallest by node declaration order.
///
/// Throws TooLarge when the model has more than `max_atoms` atomic nodes and
/// TargetIndestructible when no finite-cost subset disrupts the target.
Solution brute_force_metric(const Model& model, std::size_t max_atoms = 20);

}  // namespace icsguard
