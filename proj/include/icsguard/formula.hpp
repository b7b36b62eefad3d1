#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "icsguard/model.hpp"

namespace icsguard {

/// Propositional formula stored as a DAG of hash-consed variables and gates.
///
/// Nodes live in an arena; every child is created before its parent, so the
/// arena order is a topological order. Shared subformulas appear once.
class Formula {
 public:
  enum class Op : std::uint8_t { var, negation, conjunction, disjunction };
  using Ref = std::uint32_t;

  struct Node {
    Op op;
    std::string token;         // var only
    std::vector<Ref> children;  // gates only; at least one
  };

  /// Returns the unique node for `token`.
  Ref var(std::string_view token);
  Ref negation(Ref child);
  /// Throws std::invalid_argument when `children` is empty.
  Ref conjunction(std::vector<Ref> children);
  Ref disjunction(std::vector<Ref> children);

  void set_root(Ref root) { root_ = root; }
  Ref root() const { return root_; }
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(Ref ref) const { return nodes_[ref]; }

  /// Distinct variable tokens reachable from the root, in arena order.
  std::vector<std::string> variables() const;

  /// Truth value of the root under `value(token)`.
  bool evaluate(const std::function<bool(std::string_view)>& value) const;

  /// Infix rendering with "&", "|", "!"; nested gates of the same kind are
  /// flattened so f(c1) prints as "c1 & d & ((a & b) | (b & c))".
  std::string to_string() const;
  std::string to_string(Ref ref) const;

 private:
  Ref push(Node node);

  std::vector<Node> nodes_;
  std::unordered_map<std::string, Ref> vars_;
  Ref root_ = 0;
};

/// The disruption formula of `target`: an atomic node is satisfied when it
/// holds and all of its predecessors are satisfied; AND connectors need all
/// inputs, OR connectors at least one. Only nodes backward-reachable from the
/// target appear. Children follow edge declaration order.
/// Throws InvalidModel for invalid models (cycles, unknown target, ...).
Formula build_formula(const Model& model, std::string_view target);
Formula build_formula(const Model& model);

/// Replaces every atomic variable n by (n | s_i | ... | s_j) over the instances
/// protecting n. Instance variables are shared between all nodes they protect.
Formula expand_formula(const Formula& formula, const Model& model);

}  // namespace icsguard
