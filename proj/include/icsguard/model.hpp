#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "icsguard/cost.hpp"
#include "icsguard/errors.hpp"

namespace icsguard {

enum class NodeKind { sensor, actuator, agent, and_connector, or_connector };

constexpr bool is_atomic(NodeKind kind) {
  return kind == NodeKind::sensor || kind == NodeKind::actuator || kind == NodeKind::agent;
}

/// "sensor", "actuator", "agent", "and", "or".
std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::sensor;
  /// Compromise cost; always zero for connectors.
  Cost cost;
};

/// `to` depends on `from`.
struct Edge {
  std::string from;
  std::string to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A deployed security control protecting a set of atomic nodes at once.
struct MeasureInstance {
  std::string id;
  /// Measure type such as "F1"; empty when unspecified.
  std::string type;
  Cost cost;
  std::vector<std::string> range;
};

struct DependencyGraph {
  struct Vertex {
    std::string id;
    NodeKind kind;
  };
  std::vector<Vertex> nodes;
  std::vector<Edge> edges;
};

/// An AND/OR dependency graph with measure instances and a target node.
/// Declaration order of nodes, edges and measures is significant: it fixes
/// the order of formula children, hyperedges and tie-breaking.
struct Model {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<MeasureInstance> measures;
  std::string target;

  DependencyGraph graph() const;
};

/// Order-insensitive equality: same nodes, edges, measures (with ranges
/// compared as sets) and target.
bool structurally_equal(const Model& a, const Model& b);

enum class ViolationKind {
  empty_node_id,
  duplicate_node_id,
  duplicate_edge,
  unknown_edge_endpoint,
  cyclic_dependency,
  connector_without_inputs,
  connector_with_cost,
  missing_target,
  unknown_target,
  target_not_atomic,
  empty_measure_id,
  duplicate_measure_id,
  /// A measure id equal to a node id; both name formula variables.
  measure_id_clash,
  empty_range,
  unknown_node_in_range,
  connector_in_range,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Offending identifiers; for cycles, the node sequence around the cycle.
  std::vector<std::string> subjects;

  std::string message() const;
};

/// Every structural defect of `model`; empty when the model is valid.
std::vector<Violation> validate_model(const Model& model);

class InvalidModel : public Error {
 public:
  explicit InvalidModel(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws InvalidModel when validate_model reports anything.
void require_valid(const Model& model);

struct Hyperedge {
  std::string owner;
  /// The owner first, then protecting instances in measure declaration order.
  std::vector<std::string> members;
};

/// One hyperedge per atomic node, in node declaration order.
std::vector<Hyperedge> build_hyperedges(const Model& model);

/// Attacker cost of a measure rated on the three-point skills/tools/time
/// scale: the product of the three ratings.
Cost measure_cost_from_ratings(int skills, int tools, int time);

/// Read-only adjacency view over a valid model. Indices refer to
/// `model.nodes` and `model.measures`.
class ModelIndex {
 public:
  explicit ModelIndex(const Model& model);

  const Model& model() const { return *model_; }
  std::size_t node_count() const { return model_->nodes.size(); }
  std::optional<std::size_t> find_node(std::string_view id) const;
  std::optional<std::size_t> find_measure(std::string_view id) const;
  std::size_t target() const { return target_; }

  /// Predecessors in edge declaration order.
  const std::vector<std::size_t>& predecessors(std::size_t node) const { return preds_[node]; }
  const std::vector<std::size_t>& successors(std::size_t node) const { return succs_[node]; }
  /// Instances whose range contains `node`, in measure declaration order.
  const std::vector<std::size_t>& protectors(std::size_t node) const { return protectors_[node]; }
  /// Measure ranges resolved to node indices.
  const std::vector<std::size_t>& range(std::size_t measure) const { return ranges_[measure]; }
  /// Nodes sorted so every predecessor precedes its dependants.
  const std::vector<std::size_t>& topological_order() const { return topo_; }
  /// Nodes from which the target is reachable (the target included).
  const std::vector<bool>& relevant() const { return relevant_; }

 private:
  const Model* model_;
  std::unordered_map<std::string_view, std::size_t> node_ids_;
  std::unordered_map<std::string_view, std::size_t> measure_ids_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<std::vector<std::size_t>> protectors_;
  std::vector<std::vector<std::size_t>> ranges_;
  std::vector<std::size_t> topo_;
  std::vector<bool> relevant_;
  std::size_t target_ = 0;
};

}  // namespace icsguard
