#include "icsguard/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace icsguard {

using nlohmann::json;

ParseError::ParseError(Kind kind, std::string message, std::size_t line, std::size_t column, std::string field,
                       std::vector<Violation> violations)
    : Error(std::move(message)),
      kind_(kind),
      line_(line),
      column_(column),
      field_(std::move(field)),
      violations_(std::move(violations)) {}

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw ParseError(ParseError::Kind::schema, field + ": " + what, 0, 0, field);
}

class Reader {
 public:
  Reader(const ParseOptions& options, std::vector<std::string>* warnings) : options_(options), warnings_(warnings) {}

  void allow_only(const json& object, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (const auto& [key, value] : object.items()) {
      if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
      std::string field = path.empty() ? key : path + "." + key;
      if (!options_.lenient) schema_error(field, "unknown field");
      if (warnings_) warnings_->push_back(field + ": unknown field ignored");
    }
  }

  static const json& require(const json& object, const std::string& path, const char* key) {
    auto it = object.find(key);
    if (it == object.end()) schema_error(path.empty() ? key : path + "." + key, "missing");
    return *it;
  }

  static std::string string_at(const json& value, const std::string& field) {
    if (!value.is_string()) schema_error(field, "expected a string");
    return value.get<std::string>();
  }

  static Cost cost_at(const json& value, const std::string& field) {
    if (value.is_string()) {
      if (value.get<std::string>() == "inf") return Cost::infinite();
      schema_error(field, "cost must be a number or \"inf\"");
    }
    if (value.is_number_unsigned()) return Cost::from_integer(static_cast<std::int64_t>(value.get<std::uint64_t>()));
    if (value.is_number_integer()) {
      auto v = value.get<std::int64_t>();
      if (v < 0) schema_error(field, "cost must be non-negative");
      return Cost::from_integer(v);
    }
    if (value.is_number_float()) {
      if (auto c = Cost::from_double(value.get<double>())) return *c;
      schema_error(field, "cost must be non-negative with at most three decimals");
    }
    schema_error(field, "cost must be a number or \"inf\"");
  }

  Model read(const json& doc) {
    if (!doc.is_object()) schema_error("$", "document must be an object");
    allow_only(doc, "", {"nodes", "edges", "measures", "target"});
    Model model;
    model.target = string_at(require(doc, "", "target"), "target");

    const json& nodes = require(doc, "", "nodes");
    if (!nodes.is_array()) schema_error("nodes", "expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string path = "nodes[" + std::to_string(i) + "]";
      const json& n = nodes[i];
      if (!n.is_object()) schema_error(path, "expected an object");
      allow_only(n, path, {"id", "kind", "cost"});
      Node node;
      node.id = string_at(require(n, path, "id"), path + ".id");
      std::string kind = string_at(require(n, path, "kind"), path + ".kind");
      auto parsed = parse_node_kind(kind);
      if (!parsed) schema_error(path + ".kind", "unknown kind '" + kind + "'");
      node.kind = *parsed;
      if (auto c = n.find("cost"); c != n.end()) node.cost = cost_at(*c, path + ".cost");
      model.nodes.push_back(std::move(node));
    }

    if (auto edges = doc.find("edges"); edges != doc.end()) {
      if (!edges->is_array()) schema_error("edges", "expected an array");
      for (std::size_t i = 0; i < edges->size(); ++i) {
        const std::string path = "edges[" + std::to_string(i) + "]";
        const json& e = (*edges)[i];
        if (!e.is_array() || e.size() != 2) schema_error(path, "expected [from, to]");
        model.edges.push_back({string_at(e[0], path + "[0]"), string_at(e[1], path + "[1]")});
      }
    }

    if (auto measures = doc.find("measures"); measures != doc.end()) {
      if (!measures->is_array()) schema_error("measures", "expected an array");
      for (std::size_t i = 0; i < measures->size(); ++i) {
        const std::string path = "measures[" + std::to_string(i) + "]";
        const json& m = (*measures)[i];
        if (!m.is_object()) schema_error(path, "expected an object");
        allow_only(m, path, {"id", "type", "cost", "range"});
        MeasureInstance inst;
        inst.id = string_at(require(m, path, "id"), path + ".id");
        if (auto t = m.find("type"); t != m.end()) inst.type = string_at(*t, path + ".type");
        inst.cost = cost_at(require(m, path, "cost"), path + ".cost");
        const json& range = require(m, path, "range");
        if (!range.is_array()) schema_error(path + ".range", "expected an array");
        for (std::size_t j = 0; j < range.size(); ++j) {
          inst.range.push_back(string_at(range[j], path + ".range[" + std::to_string(j) + "]"));
        }
        model.measures.push_back(std::move(inst));
      }
    }
    return model;
  }

 private:
  const ParseOptions& options_;
  std::vector<std::string>* warnings_;
};

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string cost_literal(const Cost& c) { return c.is_infinite() ? "\"inf\"" : c.to_string(); }

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::string dot_id(const std::string& s) { return "\"" + dot_escape(s) + "\""; }

// Quoted label with one line per part.
std::string dot_label(std::initializer_list<std::string> lines) {
  std::string out;
  for (const auto& line : lines) out += (out.empty() ? "" : "\\n") + dot_escape(line);
  return "\"" + out + "\"";
}

}  // namespace

Model parse_model(std::string_view text, const ParseOptions& options, std::vector<std::string>* warnings) {
  json doc = json::object();
  const bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (!blank) try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(ParseError::Kind::syntax,
                     "syntax error at line " + std::to_string(line) + ", column " + std::to_string(column), line,
                     column);
  }
  Model model = Reader(options, warnings).read(doc);
  auto violations = validate_model(model);
  if (!violations.empty()) {
    std::string message = "invalid model:";
    for (const auto& v : violations) message += " " + v.message();
    throw ParseError(ParseError::Kind::validation, message, 0, 0, {}, std::move(violations));
  }
  return model;
}

Model read_model_file(const std::string& path, const ParseOptions& options, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), options, warnings);
}

std::string write_model(const Model& model) {
  std::vector<const Node*> nodes;
  for (const auto& n : model.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(), [](const Node* a, const Node* b) { return a->id < b->id; });
  std::vector<Edge> edges = model.edges;
  std::sort(edges.begin(), edges.end());
  std::vector<const MeasureInstance*> measures;
  for (const auto& m : model.measures) measures.push_back(&m);
  std::sort(measures.begin(), measures.end(),
            [](const MeasureInstance* a, const MeasureInstance* b) { return a->id < b->id; });

  std::ostringstream out;
  out << "{\n  \"nodes\": [";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = *nodes[i];
    out << (i ? ",\n" : "\n") << "    {\"id\": " << quoted(n.id) << ", \"kind\": " << quoted(std::string(to_string(n.kind)));
    if (is_atomic(n.kind) || !n.cost.is_zero()) out << ", \"cost\": " << cost_literal(n.cost);
    out << "}";
  }
  out << (nodes.empty() ? "],\n" : "\n  ],\n");

  out << "  \"edges\": [";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out << (i ? ",\n" : "\n") << "    [" << quoted(edges[i].from) << ", " << quoted(edges[i].to) << "]";
  }
  out << (edges.empty() ? "],\n" : "\n  ],\n");

  out << "  \"measures\": [";
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const MeasureInstance& m = *measures[i];
    std::vector<std::string> range = m.range;
    std::sort(range.begin(), range.end());
    out << (i ? ",\n" : "\n") << "    {\"id\": " << quoted(m.id);
    if (!m.type.empty()) out << ", \"type\": " << quoted(m.type);
    out << ", \"cost\": " << cost_literal(m.cost) << ", \"range\": [";
    for (std::size_t j = 0; j < range.size(); ++j) out << (j ? ", " : "") << quoted(range[j]);
    out << "]}";
  }
  out << (measures.empty() ? "],\n" : "\n  ],\n");
  out << "  \"target\": " << quoted(model.target) << "\n}\n";
  return out.str();
}

std::string export_wcnf(const WeightedInstance& instance) {
  std::ostringstream out;
  for (std::uint32_t v = 1; v < instance.names.size() && v <= instance.var_count; ++v) {
    if (!instance.names[v].empty()) out << "c var " << v << ' ' << instance.names[v] << '\n';
  }
  const std::uint64_t top = 1 + instance.total_soft_weight();
  out << "p wcnf " << instance.var_count << ' ' << instance.hard.size() + instance.soft.size() << ' ' << top << '\n';
  for (const auto& clause : instance.hard) {
    out << top;
    for (Literal l : clause) out << ' ' << l.dimacs();
    out << " 0\n";
  }
  for (const auto& s : instance.soft) out << s.weight << ' ' << s.literal.dimacs() << " 0\n";
  return out.str();
}

WeightedInstance parse_wcnf(std::string_view text) {
  WeightedInstance inst;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::uint64_t top = 0;
  std::size_t declared = 0;
  std::size_t seen = 0;
  std::vector<std::pair<std::uint64_t, Clause>> relax;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") {
      std::string tag, name;
      std::uint32_t var = 0;
      if (ls >> tag && tag == "var" && ls >> var >> name) {
        if (inst.names.size() <= var) inst.names.resize(static_cast<std::size_t>(var) + 1);
        inst.names[var] = name;
      }
      continue;
    }
    if (first == "p") {
      std::string format;
      if (!(ls >> format >> inst.var_count >> declared >> top) || format != "wcnf") {
        throw std::invalid_argument("parse_wcnf: bad header");
      }
      header = true;
      continue;
    }
    if (!header) throw std::invalid_argument("parse_wcnf: clause before header");
    std::uint64_t weight = std::stoull(first);
    Clause clause;
    std::int64_t lit = 0;
    bool terminated = false;
    while (ls >> lit) {
      if (lit == 0) {
        terminated = true;
        break;
      }
      if (static_cast<std::uint64_t>(lit < 0 ? -lit : lit) > inst.var_count) {
        throw std::invalid_argument("parse_wcnf: literal out of range");
      }
      clause.push_back(Literal::from_dimacs(static_cast<std::int32_t>(lit)));
    }
    if (!terminated || clause.empty()) throw std::invalid_argument("parse_wcnf: malformed clause");
    ++seen;
    if (weight >= top) {
      inst.hard.push_back(std::move(clause));
    } else if (weight == 0) {
      continue;
    } else if (clause.size() == 1) {
      inst.soft.push_back({clause[0], weight});
    } else {
      relax.emplace_back(weight, std::move(clause));
    }
  }
  if (!header) throw std::invalid_argument("parse_wcnf: missing header");
  if (seen != declared) throw std::invalid_argument("parse_wcnf: clause count mismatch");
  for (auto& [weight, clause] : relax) {
    Literal r = Literal::positive(++inst.var_count);
    clause.push_back(~r);
    inst.hard.push_back(std::move(clause));
    inst.soft.push_back({r, weight});
  }
  inst.names.resize(static_cast<std::size_t>(inst.var_count) + 1);
  return inst;
}

std::string export_dot(const Model& model, const Solution* solution) {
  std::unordered_set<std::string> hot;
  if (solution) {
    hot.insert(solution->critical_nodes.begin(), solution->critical_nodes.end());
    hot.insert(solution->critical_measures.begin(), solution->critical_measures.end());
  }
  const std::string highlight = ", color=red, penwidth=2";
  std::ostringstream out;
  out << "digraph model {\n  rankdir=BT;\n";
  for (const auto& n : model.nodes) {
    out << "  " << dot_id(n.id) << " [";
    if (is_atomic(n.kind)) {
      out << "shape=box, label=" << dot_label({n.id, std::string(to_string(n.kind)) + " " + n.cost.to_string()});
    } else {
      out << "shape=triangle, label=" << (n.kind == NodeKind::and_connector ? "\"AND\"" : "\"OR\"");
    }
    if (n.id == model.target) out << ", peripheries=2";
    if (hot.count(n.id)) out << highlight;
    out << "];\n";
  }
  for (const auto& m : model.measures) {
    std::string label = dot_label({m.id + (m.type.empty() ? "" : " (" + m.type + ")"), m.cost.to_string()});
    out << "  " << dot_id(m.id) << " [shape=ellipse, style=dashed, label=" << label;
    if (hot.count(m.id)) out << highlight;
    out << "];\n";
  }
  for (const auto& e : model.edges) out << "  " << dot_id(e.from) << " -> " << dot_id(e.to) << ";\n";
  for (const auto& m : model.measures) {
    for (const auto& r : m.range) {
      out << "  " << dot_id(m.id) << " -> " << dot_id(r) << " [style=dashed, arrowhead=none];\n";
    }
  }
  out << "}\n";
  return out.str();
}

namespace {

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

}  // namespace

std::string format_text_report(const Model& model, const Solution& solution) {
  std::ostringstream out;
  out << "target: " << model.target << '\n'
      << "critical nodes: {" << join(sorted(solution.critical_nodes)) << "}\n"
      << "critical measures: {" << join(sorted(solution.critical_measures)) << "}\n"
      << "total cost: " << solution.total_cost.to_string() << '\n'
      << "encode: " << solution.stats.encode_ms << " ms, solve: " << solution.stats.solve_ms << " ms, vars: "
      << solution.stats.vars << ", clauses: " << solution.stats.clauses << '\n';
  return out.str();
}

std::string format_json_report(const Model& model, const Solution& solution) {
  json report;
  report["target"] = model.target;
  report["critical_nodes"] = sorted(solution.critical_nodes);
  report["critical_measures"] = sorted(solution.critical_measures);
  report["total_cost"] = json::parse(solution.total_cost.to_string());
  report["stats"] = {{"encode_ms", solution.stats.encode_ms},
                     {"solve_ms", solution.stats.solve_ms},
                     {"vars", solution.stats.vars},
                     {"clauses", solution.stats.clauses},
                     {"sat_calls", solution.stats.sat_calls},
                     {"cores", solution.stats.cores}};
  return report.dump(2) + "\n";
}

}  // namespace icsguard
