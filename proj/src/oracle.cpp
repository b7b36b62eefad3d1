#include "icsguard/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

namespace icsguard {

namespace {

// Standalone evaluator: deliberately shares nothing with the formula builder.
class Evaluator {
 public:
  explicit Evaluator(const Model& model) : model_(model) {
    for (std::size_t i = 0; i < model.nodes.size(); ++i) index_[model.nodes[i].id] = i;
    preds_.resize(model.nodes.size());
    for (const auto& e : model.edges) preds_[index_.at(e.to)].push_back(index_.at(e.from));
    target_ = index_.at(model.target);
  }

  std::size_t index_of(const std::string& id) const { return index_.at(id); }

  // True when the target still operates with `down` nodes compromised.
  bool operational(const std::vector<bool>& down) const {
    std::vector<std::int8_t> memo(model_.nodes.size(), -1);
    std::function<bool(std::size_t)> works = [&](std::size_t v) -> bool {
      if (memo[v] >= 0) return memo[v] != 0;
      bool ok;
      switch (model_.nodes[v].kind) {
        case NodeKind::and_connector:
          ok = true;
          for (std::size_t p : preds_[v]) ok = ok && works(p);
          break;
        case NodeKind::or_connector:
          ok = false;
          for (std::size_t p : preds_[v]) ok = ok || works(p);
          break;
        default:
          ok = !down[v];
          for (std::size_t p : preds_[v]) ok = ok && works(p);
          break;
      }
      memo[v] = ok ? 1 : 0;
      return ok;
    };
    return works(target_);
  }

 private:
  const Model& model_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> preds_;
  std::size_t target_ = 0;
};

}  // namespace

Solution brute_force_metric(const Model& model, std::size_t max_atoms) {
  require_valid(model);
  Evaluator eval(model);

  std::vector<std::size_t> atoms;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    if (is_atomic(model.nodes[i].kind)) atoms.push_back(i);
  }
  if (atoms.size() > max_atoms || atoms.size() > 62) {
    throw TooLarge("oracle limited to " + std::to_string(max_atoms) + " atomic nodes, model has " +
                   std::to_string(atoms.size()));
  }
  const std::size_t k = atoms.size();

  // Instances protecting each atom, as indices into model.measures.
  std::vector<std::vector<std::size_t>> guards(k);
  for (std::size_t m = 0; m < model.measures.size(); ++m) {
    for (const auto& id : model.measures[m].range) {
      std::size_t node = eval.index_of(id);
      for (std::size_t a = 0; a < k; ++a) {
        if (atoms[a] == node) guards[a].push_back(m);
      }
    }
  }

  bool all_positive = true;
  for (std::size_t a = 0; a < k; ++a) all_positive = all_positive && !model.nodes[atoms[a]].cost.is_zero();
  for (const auto& m : model.measures) all_positive = all_positive && !m.cost.is_zero();

  auto cost_of = [&](std::uint64_t mask) {
    Cost total;
    std::vector<bool> used(model.measures.size(), false);
    for (std::size_t a = 0; a < k; ++a) {
      if (!(mask >> a & 1u)) continue;
      total += model.nodes[atoms[a]].cost;
      for (std::size_t m : guards[a]) {
        if (!used[m]) {
          used[m] = true;
          total += model.measures[m].cost;
        }
      }
    }
    return total;
  };

  std::optional<std::uint64_t> best;
  Cost best_cost = Cost::infinite();
  std::vector<std::uint64_t> valid_minimal;
  std::vector<bool> down(model.nodes.size(), false);

  // Increasing cardinality, and within one cardinality increasing bit
  // pattern, so the first optimum met wins every tie.
  for (std::size_t size = 0; size <= k; ++size) {
    std::vector<std::uint64_t> masks;
    if (size == 0) {
      masks.push_back(0);
    } else {
      std::uint64_t mask = (std::uint64_t{1} << size) - 1;
      const std::uint64_t limit = std::uint64_t{1} << k;
      while (mask < limit) {
        masks.push_back(mask);
        std::uint64_t c = mask & (~mask + 1);
        std::uint64_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
      }
    }
    // Lexicographic order over declaration indices: compare reversed bits.
    std::sort(masks.begin(), masks.end(), [&](std::uint64_t x, std::uint64_t y) {
      for (std::size_t a = 0; a < k; ++a) {
        bool bx = x >> a & 1u;
        bool by = y >> a & 1u;
        if (bx != by) return bx;
      }
      return false;
    });
    for (std::uint64_t mask : masks) {
      if (all_positive) {
        bool superset = false;
        for (std::uint64_t v : valid_minimal) superset = superset || (mask & v) == v;
        if (superset) continue;
      }
      Cost c = cost_of(mask);
      if (c.is_infinite() || (best && c >= best_cost)) continue;
      for (std::size_t a = 0; a < k; ++a) down[atoms[a]] = mask >> a & 1u;
      if (eval.operational(down)) continue;
      if (all_positive) valid_minimal.push_back(mask);
      best = mask;
      best_cost = c;
    }
  }
  if (!best) throw TargetIndestructible("no finite-cost subset disrupts '" + model.target + "'");

  Solution sol;
  std::vector<bool> used(model.measures.size(), false);
  for (std::size_t a = 0; a < k; ++a) {
    if (!(*best >> a & 1u)) continue;
    sol.critical_nodes.push_back(model.nodes[atoms[a]].id);
    for (std::size_t m : guards[a]) used[m] = true;
  }
  for (std::size_t m = 0; m < model.measures.size(); ++m) {
    if (used[m]) sol.critical_measures.push_back(model.measures[m].id);
  }
  sol.total_cost = best_cost;
  return sol;
}

}  // namespace icsguard
