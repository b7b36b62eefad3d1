#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icsguard/maxsat.hpp"
#include "icsguard/metric.hpp"
#include "icsguard/model.hpp"

namespace icsguard {

/// A model document that could not be read.
class ParseError : public Error {
 public:
  enum class Kind { syntax, schema, validation };

  ParseError(Kind kind, std::string message, std::size_t line = 0, std::size_t column = 0, std::string field = {},
             std::vector<Violation> violations = {});

  Kind kind() const { return kind_; }
  /// 1-based position of a syntax error; 0 when unknown.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// JSON path of the offending field for schema errors, e.g. "nodes[2].kind".
  const std::string& field() const { return field_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
  std::string field_;
  std::vector<Violation> violations_;
};

struct ParseOptions {
  /// Unknown fields become warnings instead of schema errors.
  bool lenient = false;
};

/// Reads a model document:
///
///   {"nodes": [{"id": "a", "kind": "sensor", "cost": 3}, ...],
///    "edges": [["a", "and1"], ...],
///    "measures": [{"id": "s1", "type": "F1", "cost": "inf", "range": ["a"]}],
///    "target": "c1"}
///
/// Kinds are sensor, actuator, agent, and, or. Costs are non-negative numbers
/// with at most three decimals or "inf"; a missing node cost is 0. The model
/// is validated before it is returned.
Model parse_model(std::string_view text, const ParseOptions& options = {},
                  std::vector<std::string>* warnings = nullptr);

/// Canonical document: nodes, edges, measures and range members sorted, one
/// entry per line. parse_model(write_model(m)) is structurally equal to m.
std::string write_model(const Model& model);

Model read_model_file(const std::string& path, const ParseOptions& options = {},
                      std::vector<std::string>* warnings = nullptr);

/// Classic WCNF: "c var <index> <name>" comments for named variables, then
/// "p wcnf <vars> <clauses> <top>" with top = 1 + total soft weight, hard
/// clauses weighted top, soft units weighted by their cost.
std::string export_wcnf(const WeightedInstance& instance);

/// Reads classic WCNF. Soft clauses with more than one literal are relaxed
/// through a fresh variable so the result keeps unit soft clauses only.
/// Throws std::invalid_argument on malformed input.
WeightedInstance parse_wcnf(std::string_view text);

/// Graphviz digraph with edges pointing from dependency to dependant. Atomic
/// nodes are boxes, connectors triangles labelled AND/OR, measure instances
/// dashed ellipses linked to what they protect. With a solution, critical
/// nodes and measures are drawn red.
std::string export_dot(const Model& model, const Solution* solution = nullptr);

/// Human-readable report; nodes and measures sorted lexicographically.
std::string format_text_report(const Model& model, const Solution& solution);

/// {"target", "critical_nodes", "critical_measures", "total_cost", "stats"}.
std::string format_json_report(const Model& model, const Solution& solution);

}  // namespace icsguard
