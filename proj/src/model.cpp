#include "icsguard/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace icsguard {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::sensor: return "sensor";
    case NodeKind::actuator: return "actuator";
    case NodeKind::agent: return "agent";
    case NodeKind::and_connector: return "and";
    case NodeKind::or_connector: return "or";
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "sensor") return NodeKind::sensor;
  if (text == "actuator") return NodeKind::actuator;
  if (text == "agent") return NodeKind::agent;
  if (text == "and") return NodeKind::and_connector;
  if (text == "or") return NodeKind::or_connector;
  return std::nullopt;
}

DependencyGraph Model::graph() const {
  DependencyGraph g;
  g.nodes.reserve(nodes.size());
  for (const auto& n : nodes) {
    g.nodes.push_back({n.id, n.kind});
  }
  g.edges = edges;
  return g;
}

bool structurally_equal(const Model& a, const Model& b) {
  if (a.target != b.target || a.nodes.size() != b.nodes.size() ||
      a.edges.size() != b.edges.size() || a.measures.size() != b.measures.size()) {
    return false;
  }
  std::map<std::string, std::pair<NodeKind, Cost>> na, nb;
  for (const auto& n : a.nodes) na.emplace(n.id, std::pair{n.kind, n.cost});
  for (const auto& n : b.nodes) nb.emplace(n.id, std::pair{n.kind, n.cost});
  if (na != nb) return false;

  std::multiset<Edge> ea(a.edges.begin(), a.edges.end());
  std::multiset<Edge> eb(b.edges.begin(), b.edges.end());
  if (ea != eb) return false;

  using MeasureKey = std::tuple<std::string, Cost, std::set<std::string>>;
  std::map<std::string, MeasureKey> ma, mb;
  for (const auto& m : a.measures) {
    ma.emplace(m.id, MeasureKey{m.type, m.cost, {m.range.begin(), m.range.end()}});
  }
  for (const auto& m : b.measures) {
    mb.emplace(m.id, MeasureKey{m.type, m.cost, {m.range.begin(), m.range.end()}});
  }
  return ma == mb;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::empty_node_id: return "EmptyNodeId";
    case ViolationKind::duplicate_node_id: return "DuplicateNodeId";
    case ViolationKind::duplicate_edge: return "DuplicateEdge";
    case ViolationKind::unknown_edge_endpoint: return "UnknownEdgeEndpoint";
    case ViolationKind::cyclic_dependency: return "CyclicDependency";
    case ViolationKind::connector_without_inputs: return "ConnectorWithoutInputs";
    case ViolationKind::connector_with_cost: return "ConnectorWithCost";
    case ViolationKind::missing_target: return "MissingTarget";
    case ViolationKind::unknown_target: return "UnknownTarget";
    case ViolationKind::target_not_atomic: return "TargetNotAtomic";
    case ViolationKind::empty_measure_id: return "EmptyMeasureId";
    case ViolationKind::duplicate_measure_id: return "DuplicateMeasureId";
    case ViolationKind::measure_id_clash: return "MeasureIdClash";
    case ViolationKind::empty_range: return "EmptyRange";
    case ViolationKind::unknown_node_in_range: return "UnknownNodeInRange";
    case ViolationKind::connector_in_range: return "ConnectorInRange";
  }
  return "?";
}

std::string Violation::message() const {
  std::ostringstream out;
  out << to_string(kind);
  if (!subjects.empty()) {
    out << '{';
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      out << (i ? "," : "") << subjects[i];
    }
    out << '}';
  }
  return out.str();
}

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
  std::string out = "invalid model:";
  for (const auto& v : violations) {
    out += ' ';
    out += v.message();
  }
  return out;
}

// Depth-first search over the successor relation; every back edge closes a
// cycle whose node sequence is read off the DFS stack.
void find_cycles(const std::vector<std::vector<std::size_t>>& succs, const std::vector<Node>& nodes,
                 std::vector<Violation>& out) {
  enum : char { white, grey, black };
  std::vector<char> colour(succs.size(), white);
  std::vector<std::size_t> path;
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, next successor slot)
  for (std::size_t root = 0; root < succs.size(); ++root) {
    if (colour[root] != white) continue;
    stack.push_back({root, 0});
    colour[root] = grey;
    path.push_back(root);
    while (!stack.empty()) {
      auto& [v, slot] = stack.back();
      if (slot < succs[v].size()) {
        std::size_t w = succs[v][slot++];
        if (colour[w] == white) {
          colour[w] = grey;
          path.push_back(w);
          stack.push_back({w, 0});
        } else if (colour[w] == grey) {
          Violation cycle{ViolationKind::cyclic_dependency, {}};
          auto it = std::find(path.begin(), path.end(), w);
          for (; it != path.end(); ++it) cycle.subjects.push_back(nodes[*it].id);
          out.push_back(std::move(cycle));
        }
      } else {
        colour[v] = black;
        path.pop_back();
        stack.pop_back();
      }
    }
  }
}

}  // namespace

InvalidModel::InvalidModel(std::vector<Violation> violations)
    : Error(join_messages(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_model(const Model& model) {
  std::vector<Violation> out;
  std::unordered_map<std::string_view, std::size_t> ids;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    const Node& n = model.nodes[i];
    if (n.id.empty()) {
      out.push_back({ViolationKind::empty_node_id, {}});
      continue;
    }
    if (!ids.emplace(n.id, i).second) {
      out.push_back({ViolationKind::duplicate_node_id, {n.id}});
    }
    if (!is_atomic(n.kind) && !n.cost.is_zero()) {
      out.push_back({ViolationKind::connector_with_cost, {n.id}});
    }
  }

  std::vector<std::vector<std::size_t>> succs(model.nodes.size());
  std::vector<std::size_t> in_degree(model.nodes.size(), 0);
  std::set<std::pair<std::string_view, std::string_view>> seen_edges;
  for (const Edge& e : model.edges) {
    auto from = ids.find(e.from);
    auto to = ids.find(e.to);
    if (from == ids.end() || to == ids.end()) {
      out.push_back({ViolationKind::unknown_edge_endpoint, {e.from, e.to}});
      continue;
    }
    if (!seen_edges.emplace(e.from, e.to).second) {
      out.push_back({ViolationKind::duplicate_edge, {e.from, e.to}});
      continue;
    }
    succs[from->second].push_back(to->second);
    ++in_degree[to->second];
  }
  find_cycles(succs, model.nodes, out);

  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    if (!is_atomic(model.nodes[i].kind) && in_degree[i] == 0) {
      out.push_back({ViolationKind::connector_without_inputs, {model.nodes[i].id}});
    }
  }

  if (model.target.empty()) {
    out.push_back({ViolationKind::missing_target, {}});
  } else if (auto t = ids.find(model.target); t == ids.end()) {
    out.push_back({ViolationKind::unknown_target, {model.target}});
  } else if (!is_atomic(model.nodes[t->second].kind)) {
    out.push_back({ViolationKind::target_not_atomic, {model.target}});
  }

  std::unordered_set<std::string_view> measure_ids;
  for (const auto& m : model.measures) {
    if (m.id.empty()) {
      out.push_back({ViolationKind::empty_measure_id, {}});
    } else if (!measure_ids.insert(m.id).second) {
      out.push_back({ViolationKind::duplicate_measure_id, {m.id}});
    } else if (ids.count(m.id)) {
      out.push_back({ViolationKind::measure_id_clash, {m.id}});
    }
    if (m.range.empty()) {
      out.push_back({ViolationKind::empty_range, {m.id}});
    }
    for (const auto& member : m.range) {
      auto it = ids.find(member);
      if (it == ids.end()) {
        out.push_back({ViolationKind::unknown_node_in_range, {m.id, member}});
      } else if (!is_atomic(model.nodes[it->second].kind)) {
        out.push_back({ViolationKind::connector_in_range, {m.id, member}});
      }
    }
  }
  return out;
}

void require_valid(const Model& model) {
  auto violations = validate_model(model);
  if (!violations.empty()) {
    throw InvalidModel(std::move(violations));
  }
}

std::vector<Hyperedge> build_hyperedges(const Model& model) {
  ModelIndex index(model);
  std::vector<Hyperedge> out;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    if (!is_atomic(model.nodes[i].kind)) continue;
    Hyperedge e{model.nodes[i].id, {model.nodes[i].id}};
    for (std::size_t m : index.protectors(i)) {
      e.members.push_back(model.measures[m].id);
    }
    out.push_back(std::move(e));
  }
  return out;
}

Cost measure_cost_from_ratings(int skills, int tools, int time) {
  for (int f : {skills, tools, time}) {
    if (f < 1 || f > 3) {
      throw RatingOutOfRange("rating " + std::to_string(f) + " is outside the scale 1..3");
    }
  }
  return Cost::from_integer(skills * tools * time);
}

ModelIndex::ModelIndex(const Model& model) : model_(&model) {
  require_valid(model);
  const std::size_t n = model.nodes.size();
  for (std::size_t i = 0; i < n; ++i) node_ids_.emplace(model.nodes[i].id, i);
  for (std::size_t i = 0; i < model.measures.size(); ++i) measure_ids_.emplace(model.measures[i].id, i);

  preds_.resize(n);
  succs_.resize(n);
  std::vector<std::size_t> in_degree(n, 0);
  for (const Edge& e : model.edges) {
    std::size_t from = node_ids_.at(e.from);
    std::size_t to = node_ids_.at(e.to);
    preds_[to].push_back(from);
    succs_[from].push_back(to);
    ++in_degree[to];
  }

  protectors_.resize(n);
  ranges_.resize(model.measures.size());
  for (std::size_t m = 0; m < model.measures.size(); ++m) {
    for (const auto& member : model.measures[m].range) {
      std::size_t node = node_ids_.at(member);
      // A range listing the same node twice still protects it once.
      if (std::find(ranges_[m].begin(), ranges_[m].end(), node) != ranges_[m].end()) continue;
      ranges_[m].push_back(node);
      protectors_[node].push_back(m);
    }
  }

  // Kahn's algorithm.
  std::vector<std::size_t> ready;
  for (std::size_t i = n; i-- > 0;) {
    if (in_degree[i] == 0) ready.push_back(i);
  }
  topo_.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.back();
    ready.pop_back();
    topo_.push_back(v);
    for (std::size_t w : succs_[v]) {
      if (--in_degree[w] == 0) ready.push_back(w);
    }
  }

  target_ = node_ids_.at(model.target);
  relevant_.assign(n, false);
  std::vector<std::size_t> work{target_};
  relevant_[target_] = true;
  while (!work.empty()) {
    std::size_t v = work.back();
    work.pop_back();
    for (std::size_t p : preds_[v]) {
      if (!relevant_[p]) {
        relevant_[p] = true;
        work.push_back(p);
      }
    }
  }
}

std::optional<std::size_t> ModelIndex::find_node(std::string_view id) const {
  auto it = node_ids_.find(id);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ModelIndex::find_measure(std::string_view id) const {
  auto it = measure_ids_.find(id);
  if (it == measure_ids_.end()) return std::nullopt;
  return it->second;
}

}  // namespace icsguard
