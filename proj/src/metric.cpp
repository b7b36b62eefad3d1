#include "icsguard/metric.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "icsguard/cnf.hpp"
#include "icsguard/formula.hpp"

namespace icsguard {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<bool> membership(const ModelIndex& index, const std::vector<std::string>& nodes) {
  std::vector<bool> in(index.node_count(), false);
  for (const auto& id : nodes) {
    if (auto n = index.find_node(id)) in[*n] = true;
  }
  return in;
}

// Deletion by propagation, in topological order; `deleted[v]` is final once
// all predecessors are settled.
std::vector<bool> propagate(const ModelIndex& index, const std::vector<bool>& removed) {
  const auto& nodes = index.model().nodes;
  std::vector<bool> deleted(nodes.size(), false);
  for (std::size_t v : index.topological_order()) {
    const auto& preds = index.predecessors(v);
    bool any = std::any_of(preds.begin(), preds.end(), [&](std::size_t p) { return deleted[p]; });
    bool all = std::all_of(preds.begin(), preds.end(), [&](std::size_t p) { return deleted[p]; });
    switch (nodes[v].kind) {
      case NodeKind::and_connector: deleted[v] = any; break;
      case NodeKind::or_connector: deleted[v] = all; break;
      default: deleted[v] = removed[v] || any; break;
    }
  }
  return deleted;
}

}  // namespace

MetricEncoding encode_metric(const Model& model) {
  ModelIndex index(model);
  Formula formula = expand_formula(build_formula(model), model);
  formula.set_root(formula.negation(formula.root()));
  CnfFormula cnf = tseitin_cnf(formula);

  MetricEncoding enc;
  WeightedInstance& inst = enc.instance;
  inst.var_count = cnf.var_count();
  inst.names.assign(static_cast<std::size_t>(inst.var_count) + 1, std::string());
  inst.hard = std::move(cnf.clauses);
  enc.aux_count = cnf.aux_count;
  for (std::uint32_t v = 1; v <= inst.var_count; ++v) {
    const std::string& name = cnf.vars.name(v);
    if (name.empty()) continue;
    inst.names[v] = name;
    Cost cost;
    if (auto n = index.find_node(name)) {
      cost = model.nodes[*n].cost;
    } else if (auto m = index.find_measure(name)) {
      cost = model.measures[*m].cost;
    } else {
      throw std::logic_error("encode_metric: unknown variable " + name);
    }
    if (cost.is_infinite()) {
      inst.hard.push_back({Literal::positive(v)});
    } else if (!cost.is_zero()) {
      inst.soft.push_back({Literal::positive(v), static_cast<std::uint64_t>(cost.millis())});
    }
  }
  return enc;
}

Solution compute_metric(const Model& model, const MetricOptions& options) {
  const auto start = Clock::now();
  MetricEncoding enc = encode_metric(model);
  ModelIndex index(model);
  Solution sol;
  sol.stats.encode_ms = elapsed_ms(start);
  sol.stats.vars = enc.instance.var_count;
  sol.stats.clauses = enc.instance.hard.size() + enc.instance.soft.size();

  const auto solve_start = Clock::now();
  MaxSatOptions mopts;
  mopts.deadline = options.deadline;
  OptimumResult result = solve_wpmaxsat(enc.instance, mopts);
  sol.stats.solve_ms = elapsed_ms(solve_start);
  sol.stats.sat_calls = result.stats.sat_calls;
  sol.stats.cores = result.stats.cores;
  if (result.status == OptimumStatus::hard_unsat) {
    throw TargetIndestructible("target '" + model.target + "' cannot be disrupted at finite cost");
  }
  if (result.status == OptimumStatus::interrupted) throw Interrupted("solver deadline exceeded");

  // A node is compromised when its whole hyperedge is falsified. Nodes left
  // false only because they are free are then dropped while the attack still
  // works.
  std::unordered_map<std::string_view, bool> value;
  for (std::uint32_t v = 1; v <= enc.instance.var_count; ++v) {
    if (!enc.instance.names[v].empty()) value[enc.instance.names[v]] = result.assignment[v];
  }
  std::vector<std::string> chosen;
  for (std::size_t n = 0; n < model.nodes.size(); ++n) {
    auto it = value.find(model.nodes[n].id);
    if (it == value.end() || it->second) continue;
    bool covered = true;
    for (std::size_t m : index.protectors(n)) covered = covered && !value.at(model.measures[m].id);
    if (covered) chosen.push_back(model.nodes[n].id);
  }
  for (std::size_t i = 0; i < chosen.size();) {
    std::vector<std::string> without = chosen;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (disrupts(model, without)) {
      chosen = std::move(without);
    } else {
      ++i;
    }
  }

  sol.critical_nodes = std::move(chosen);
  sol.critical_measures = protecting_instances(model, sol.critical_nodes);
  sol.total_cost = attack_cost(model, sol.critical_nodes);
  if (sol.total_cost.is_infinite() ||
      static_cast<std::uint64_t>(sol.total_cost.millis()) != result.falsified_weight) {
    throw std::logic_error("compute_metric: decoded cost disagrees with the optimum");
  }
  if (!verify_solution(model, sol)) throw std::logic_error("compute_metric: solution failed verification");
  return sol;
}

std::vector<std::string> protecting_instances(const Model& model, const std::vector<std::string>& nodes) {
  std::unordered_set<std::string_view> in(nodes.begin(), nodes.end());
  std::vector<std::string> out;
  for (const auto& m : model.measures) {
    if (std::any_of(m.range.begin(), m.range.end(), [&](const std::string& r) { return in.count(r) > 0; })) {
      out.push_back(m.id);
    }
  }
  return out;
}

Cost attack_cost(const Model& model, const std::vector<std::string>& nodes) {
  std::unordered_set<std::string_view> in(nodes.begin(), nodes.end());
  Cost total;
  for (const auto& n : model.nodes) {
    if (in.count(n.id)) total += n.cost;
  }
  for (const auto& m : model.measures) {
    if (std::any_of(m.range.begin(), m.range.end(), [&](const std::string& r) { return in.count(r) > 0; })) {
      total += m.cost;
    }
  }
  return total;
}

bool disrupts(const Model& model, const std::vector<std::string>& nodes) {
  std::unordered_set<std::string_view> in(nodes.begin(), nodes.end());
  Formula f = build_formula(model);
  return !f.evaluate([&](std::string_view token) { return in.count(token) == 0; });
}

DependencyGraph remove_propagate(const Model& model, const std::vector<std::string>& nodes) {
  ModelIndex index(model);
  std::vector<bool> deleted = propagate(index, membership(index, nodes));
  DependencyGraph out;
  for (std::size_t v = 0; v < model.nodes.size(); ++v) {
    if (!deleted[v]) out.nodes.push_back({model.nodes[v].id, model.nodes[v].kind});
  }
  for (const auto& e : model.edges) {
    if (!deleted[*index.find_node(e.from)] && !deleted[*index.find_node(e.to)]) out.edges.push_back(e);
  }
  return out;
}

std::size_t wcc_count(const DependencyGraph& graph) {
  std::unordered_map<std::string_view, std::size_t> id;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) id.emplace(graph.nodes[i].id, i);
  std::vector<std::size_t> parent(graph.nodes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = graph.nodes.size();
  for (const auto& e : graph.edges) {
    auto a = id.find(e.from);
    auto b = id.find(e.to);
    if (a == id.end() || b == id.end()) continue;
    std::size_t ra = find(a->second);
    std::size_t rb = find(b->second);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

bool verify_solution(const Model& model, const Solution& solution) {
  ModelIndex index(model);
  const auto& x = solution.critical_nodes;
  for (const auto& id : x) {
    auto n = index.find_node(id);
    if (!n || !is_atomic(model.nodes[*n].kind)) return false;
  }
  if (!disrupts(model, x)) return false;

  std::vector<std::string> measures = protecting_instances(model, x);
  std::vector<std::string> claimed = solution.critical_measures;
  std::sort(measures.begin(), measures.end());
  std::sort(claimed.begin(), claimed.end());
  if (measures != claimed) return false;
  if (attack_cost(model, x) != solution.total_cost) return false;

  if (x.size() == 1 && x.front() == model.target) return true;
  return propagate(index, membership(index, x))[index.target()];
}

}  // namespace icsguard
