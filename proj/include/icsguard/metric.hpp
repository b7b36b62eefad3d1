#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icsguard/maxsat.hpp"
#include "icsguard/model.hpp"

namespace icsguard {

struct SolveStats {
  double encode_ms = 0;
  double solve_ms = 0;
  std::uint32_t vars = 0;
  std::size_t clauses = 0;
  std::uint64_t sat_calls = 0;
  std::uint64_t cores = 0;
};

/// A minimum-cost disruption of the target.
struct Solution {
  /// Atomic nodes to compromise, in node declaration order.
  std::vector<std::string> critical_nodes;
  /// Every instance protecting a critical node, in measure declaration order.
  std::vector<std::string> critical_measures;
  Cost total_cost;
  SolveStats stats;
};

/// The optimisation problem for a model: hard clauses say the expanded
/// target formula is false; every node or instance variable with a positive
/// finite cost is a soft unit weighted by its cost in thousandths; infinite
/// costs become hard units. `names` maps variables to node/instance ids.
struct MetricEncoding {
  WeightedInstance instance;
  std::uint32_t aux_count = 0;
};

MetricEncoding encode_metric(const Model& model);

struct MetricOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Minimum attacker cost to disrupt the target, counting each protecting
/// instance once however many critical nodes it covers.
///
/// Throws InvalidModel, TargetIndestructible when no finite-cost attack
/// exists, and Interrupted when the deadline passes.
Solution compute_metric(const Model& model, const MetricOptions& options = {});

/// Instances protecting any of `nodes`, in measure declaration order.
std::vector<std::string> protecting_instances(const Model& model, const std::vector<std::string>& nodes);

/// Sum of node costs plus the cost of each protecting instance, once.
Cost attack_cost(const Model& model, const std::vector<std::string>& nodes);

/// Evaluates the target formula with `nodes` false and everything else true;
/// true when that falsifies it.
bool disrupts(const Model& model, const std::vector<std::string>& nodes);

/// The graph left after deleting `nodes` and propagating: AND connectors and
/// atomic nodes die with any predecessor, OR connectors with all of them.
DependencyGraph remove_propagate(const Model& model, const std::vector<std::string>& nodes);

/// Weakly connected components; 0 for an empty graph.
std::size_t wcc_count(const DependencyGraph& graph);

/// Checks that the solution's nodes falsify the target formula, that it
/// removes the target by propagation (or is the target alone), and that its
/// measures and cost match the model.
bool verify_solution(const Model& model, const Solution& solution);

}  // namespace icsguard
