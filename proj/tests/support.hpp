#pragma once

// Shared helpers for the unit and acceptance tests: fixture loading, random
// small models, and reference evaluators that do not reuse library code.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "icsguard/genbench.hpp"
#include "icsguard/io.hpp"
#include "icsguard/maxsat.hpp"
#include "icsguard/model.hpp"

namespace testing {

inline icsguard::Model fixture(const std::string& name) {
  return icsguard::read_model_file(std::string(ICSGUARD_FIXTURE_DIR) + "/" + name + ".model");
}

inline std::string fixture_path(const std::string& name) {
  return std::string(ICSGUARD_FIXTURE_DIR) + "/" + name + ".model";
}

inline std::size_t atomic_count(const icsguard::Model& m) {
  std::size_t n = 0;
  for (const auto& node : m.nodes) n += icsguard::is_atomic(node.kind) ? 1 : 0;
  return n;
}

/// Random model with at most `max_atoms` atomic nodes and `max_instances`
/// instances. Node and instance costs are re-drawn from a mix of zero,
/// small integers, a three-decimal value and occasional infinity so ties,
/// free nodes and unbreakable elements are all exercised.
inline icsguard::Model small_model(std::uint64_t seed, int x, double p, std::size_t max_atoms = 10,
                                   std::size_t max_instances = 6, bool allow_infinite = true) {
  icsguard::Rng rng(seed);
  icsguard::Model m;
  for (;;) {
    icsguard::GenConfig gen;
    gen.size = static_cast<std::size_t>(rng.uniform(1, 16));
    gen.seed = rng.next();
    m = icsguard::generate_graph(gen);
    if (atomic_count(m) <= max_atoms) break;
  }
  icsguard::AssignConfig assign;
  assign.measures_per_node = x;
  assign.overlap = p;
  assign.cost_lo = 0;
  assign.cost_hi = 9;
  assign.seed = rng.next();
  m = icsguard::assign_measures(m, assign);
  if (m.measures.size() > max_instances) m.measures.resize(max_instances);

  auto draw = [&]() {
    std::int64_t roll = rng.uniform(0, 19);
    if (roll == 0 && allow_infinite) return icsguard::Cost::infinite();
    if (roll <= 3) return icsguard::Cost();
    if (roll == 4) return icsguard::Cost::from_millis(1250);
    return icsguard::Cost::from_integer(rng.uniform(1, 9));
  };
  for (auto& node : m.nodes) {
    if (icsguard::is_atomic(node.kind)) node.cost = draw();
  }
  for (auto& inst : m.measures) inst.cost = draw();
  return m;
}

/// Exhaustive weighted partial MaxSAT optimum; nullopt when hard clauses are
/// unsatisfiable. Only for a handful of variables.
inline std::optional<std::uint64_t> brute_force_maxsat(const icsguard::WeightedInstance& inst) {
  std::optional<std::uint64_t> best;
  const std::uint32_t n = inst.var_count;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    auto value = [&](icsguard::Literal l) { return ((mask >> (l.var() - 1)) & 1u) != l.is_negative(); };
    bool ok = true;
    for (const auto& c : inst.hard) {
      bool sat = false;
      for (auto l : c) sat = sat || value(l);
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::uint64_t cost = 0;
    for (const auto& s : inst.soft) cost += value(s.literal) ? 0 : s.weight;
    if (!best || cost < *best) best = cost;
  }
  return best;
}

/// Reference reading of the dependency semantics: does the target still
/// work when `down` nodes are compromised?
inline bool target_works(const icsguard::Model& m, const std::vector<std::string>& down) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) idx[m.nodes[i].id] = i;
  std::vector<std::vector<std::size_t>> preds(m.nodes.size());
  for (const auto& e : m.edges) preds[idx[e.to]].push_back(idx[e.from]);
  std::vector<bool> is_down(m.nodes.size(), false);
  for (const auto& d : down) is_down[idx.at(d)] = true;
  std::vector<int> memo(m.nodes.size(), -1);
  std::function<bool(std::size_t)> ok = [&](std::size_t v) {
    if (memo[v] >= 0) return memo[v] == 1;
    bool r;
    if (m.nodes[v].kind == icsguard::NodeKind::or_connector) {
      r = false;
      for (auto p : preds[v]) r = r || ok(p);
    } else {
      r = m.nodes[v].kind == icsguard::NodeKind::and_connector ? true : !is_down[v];
      for (auto p : preds[v]) r = r && ok(p);
    }
    memo[v] = r ? 1 : 0;
    return r;
  };
  return ok(idx.at(m.target));
}

}  // namespace testing
