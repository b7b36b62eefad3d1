#include "icsguard/maxsat.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "icsguard/sat_solver.hpp"

namespace icsguard {

void WeightedInstance::check() const {
  for (const auto& clause : hard) {
    if (clause.empty()) throw std::invalid_argument("empty hard clause");
    for (Literal l : clause) {
      if (l.var() == 0 || l.var() > var_count) throw std::invalid_argument("hard literal out of range");
    }
  }
  for (const auto& s : soft) {
    if (s.weight == 0) throw std::invalid_argument("soft weight must be positive");
    if (s.literal.var() == 0 || s.literal.var() > var_count) {
      throw std::invalid_argument("soft literal out of range");
    }
  }
}

std::uint64_t WeightedInstance::total_soft_weight() const {
  std::uint64_t total = 0;
  for (const auto& s : soft) total += s.weight;
  return total;
}

std::uint64_t falsified_weight(const WeightedInstance& instance, const std::vector<bool>& assignment) {
  std::uint64_t total = 0;
  for (const auto& s : instance.soft) {
    bool value = s.literal.var() < assignment.size() && assignment[s.literal.var()];
    if (value == s.literal.is_negative()) total += s.weight;
  }
  return total;
}

namespace {

// Counts true inputs; output(k) is forced true whenever at least k inputs
// hold. Outputs are materialised lazily, up to the largest bound requested.
class Totalizer {
 public:
  Totalizer(SatSolver& solver, const std::vector<Literal>& inputs) : solver_(&solver) {
    root_ = build(inputs, 0, inputs.size());
  }

  std::uint32_t size() const { return nodes_[root_].size; }

  Literal output(std::uint32_t k) {
    extend(root_, k);
    return nodes_[root_].outputs[k - 1];
  }

 private:
  struct Node {
    std::vector<Literal> outputs;
    std::uint32_t size = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(const std::vector<Literal>& inputs, std::size_t lo, std::size_t hi) {
    Node node;
    node.size = static_cast<std::uint32_t>(hi - lo);
    if (hi - lo == 1) {
      node.outputs.push_back(inputs[lo]);
    } else {
      std::size_t mid = lo + (hi - lo) / 2;
      node.left = build(inputs, lo, mid);
      node.right = build(inputs, mid, hi);
    }
    nodes_.push_back(std::move(node));
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  void extend(std::int32_t id, std::uint32_t k) {
    k = std::min(k, nodes_[id].size);
    const auto old = static_cast<std::uint32_t>(nodes_[id].outputs.size());
    if (old >= k) return;
    const std::int32_t l = nodes_[id].left;
    const std::int32_t r = nodes_[id].right;
    extend(l, k);
    extend(r, k);
    for (std::uint32_t i = old; i < k; ++i) {
      nodes_[id].outputs.push_back(Literal::positive(solver_->new_var()));
    }
    const auto& lo = nodes_[l].outputs;
    const auto& ro = nodes_[r].outputs;
    for (std::uint32_t i = 0; i <= lo.size(); ++i) {
      for (std::uint32_t j = 0; j <= ro.size(); ++j) {
        const std::uint32_t sum = i + j;
        if (sum <= old || sum > k) continue;
        Clause clause;
        if (i > 0) clause.push_back(~lo[i - 1]);
        if (j > 0) clause.push_back(~ro[j - 1]);
        clause.push_back(nodes_[id].outputs[sum - 1]);
        solver_->add_clause(clause);
      }
    }
  }

  SatSolver* solver_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

struct Term {
  Literal literal;  // must hold to avoid paying `weight`
  std::uint64_t weight = 0;
  std::int32_t totalizer = -1;
  std::uint32_t bound = 0;  // literal == ~output(bound) for totalizer terms
};

class OllSearch {
 public:
  OllSearch(const WeightedInstance& instance, const MaxSatOptions& options)
      : instance_(instance), options_(options) {
    solver_.set_deadline(options.deadline);
  }

  OptimumResult run() {
    OptimumResult result;
    solver_.ensure_vars(instance_.var_count);
    for (const auto& clause : instance_.hard) {
      if (!solver_.add_clause(clause)) {
        result.status = OptimumStatus::hard_unsat;
        return result;
      }
    }
    std::map<std::int32_t, std::uint64_t> merged;
    for (const auto& s : instance_.soft) merged[s.literal.dimacs()] += s.weight;
    for (auto [lit, weight] : merged) add_term(Literal::from_dimacs(lit), weight, -1, 0);

    auto first = call({});
    if (first == SatSolver::Result::unsat) {
      result.status = OptimumStatus::hard_unsat;
      return finish(result);
    }
    if (first == SatSolver::Result::unknown) return finish(result);
    record_model();

    std::uint64_t threshold = options_.stratify ? max_weight_below(std::numeric_limits<std::uint64_t>::max()) : 1;
    std::vector<Literal> assumptions;
    for (;;) {
      if (lower_bound_ >= upper_bound_) break;
      harden();
      assumptions.clear();
      for (const auto& t : terms_) {
        if (t.weight > 0 && t.weight >= threshold) assumptions.push_back(t.literal);
      }
      auto status = call(assumptions);
      if (status == SatSolver::Result::unknown) return finish(result);
      if (status == SatSolver::Result::sat) {
        record_model();
        std::uint64_t next = max_weight_below(threshold);
        if (next == 0) break;
        threshold = next;
        continue;
      }
      std::vector<Literal> core = solver_.core();
      if (core.empty()) break;  // only reachable once hardening proved the incumbent optimal
      if (options_.trim_cores) trim(core);
      if (interrupted_) return finish(result);
      relax(core);
    }
    result.status = OptimumStatus::optimal;
    return finish(result);
  }

 private:
  SatSolver::Result call(const std::vector<Literal>& assumptions) {
    ++sat_calls_;
    auto r = solver_.solve(assumptions);
    if (r == SatSolver::Result::unknown) interrupted_ = true;
    return r;
  }

  OptimumResult finish(OptimumResult& result) {
    result.assignment = best_;
    result.falsified_weight = best_.empty() ? 0 : upper_bound_;
    result.stats.sat_calls = sat_calls_;
    result.stats.cores = cores_;
    result.stats.lower_bound = lower_bound_;
    return result;
  }

  void record_model() {
    std::vector<bool> model = solver_.model();
    model.resize(static_cast<std::size_t>(instance_.var_count) + 1, false);
    std::uint64_t cost = falsified_weight(instance_, model);
    if (best_.empty() || cost < upper_bound_) {
      upper_bound_ = cost;
      best_ = std::move(model);
    }
  }

  std::uint64_t max_weight_below(std::uint64_t limit) const {
    std::uint64_t best = 0;
    for (const auto& t : terms_) {
      if (t.weight > 0 && t.weight < limit) best = std::max(best, t.weight);
    }
    return best;
  }

  void add_term(Literal literal, std::uint64_t weight, std::int32_t totalizer, std::uint32_t bound) {
    auto [it, inserted] = term_index_.emplace(literal.dimacs(), terms_.size());
    if (inserted) {
      terms_.push_back({literal, weight, totalizer, bound});
    } else {
      terms_[it->second].weight += weight;
    }
  }

  // Any solution violating a term heavier than the remaining gap costs more
  // than the incumbent.
  void harden() {
    const std::uint64_t gap = upper_bound_ - lower_bound_;
    for (auto& t : terms_) {
      if (t.weight > gap) {
        solver_.add_clause({t.literal});
        t.weight = 0;
      }
    }
  }

  void trim(std::vector<Literal>& core) {
    for (int round = 0; round < 3 && core.size() > 1; ++round) {
      if (call(core) != SatSolver::Result::unsat) return;
      const auto& smaller = solver_.core();
      if (smaller.empty() || smaller.size() >= core.size()) return;
      core = smaller;
    }
  }

  void relax(const std::vector<Literal>& core) {
    ++cores_;
    std::uint64_t m = std::numeric_limits<std::uint64_t>::max();
    for (Literal l : core) m = std::min(m, terms_[term_index_.at(l.dimacs())].weight);
    lower_bound_ += m;

    if (core.size() == 1) {
      Term& t = terms_[term_index_.at(core[0].dimacs())];
      solver_.add_clause({~t.literal});
      t.weight -= m;
      if (t.totalizer >= 0) {
        Term copy = t;
        bump_bound(copy, m);
      }
      return;
    }

    std::vector<Literal> violations;
    violations.reserve(core.size());
    for (Literal l : core) {
      const std::size_t idx = term_index_.at(l.dimacs());
      terms_[idx].weight -= m;
      violations.push_back(~terms_[idx].literal);
      if (terms_[idx].totalizer >= 0) {
        Term copy = terms_[idx];
        bump_bound(copy, m);
      }
    }
    totalizers_.emplace_back(solver_, violations);
    const auto id = static_cast<std::int32_t>(totalizers_.size() - 1);
    if (totalizers_.back().size() >= 2) {
      add_term(~totalizers_.back().output(2), m, id, 2);
    }
  }

  // The term "fewer than bound violations" was paid for once; the next
  // violation is charged through the following output.
  void bump_bound(const Term& t, std::uint64_t weight) {
    Totalizer& tot = totalizers_[static_cast<std::size_t>(t.totalizer)];
    if (t.bound + 1 <= tot.size()) {
      add_term(~tot.output(t.bound + 1), weight, t.totalizer, t.bound + 1);
    }
  }

  const WeightedInstance& instance_;
  const MaxSatOptions& options_;
  SatSolver solver_;
  std::vector<Term> terms_;
  std::unordered_map<std::int32_t, std::size_t> term_index_;
  std::vector<Totalizer> totalizers_;
  std::vector<bool> best_;
  std::uint64_t upper_bound_ = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t lower_bound_ = 0;
  std::uint64_t sat_calls_ = 0;
  std::uint64_t cores_ = 0;
  bool interrupted_ = false;
};

}  // namespace

OptimumResult solve_wpmaxsat(const WeightedInstance& instance, const MaxSatOptions& options) {
  instance.check();
  OllSearch search(instance, options);
  return search.run();
}

std::vector<std::vector<bool>> enumerate_optima(const WeightedInstance& instance, std::size_t limit) {
  std::vector<std::vector<bool>> out;
  auto first = solve_wpmaxsat(instance);
  if (first.status != OptimumStatus::optimal) return out;
  const std::uint64_t optimum = first.falsified_weight;

  std::vector<std::uint32_t> soft_vars;
  for (const auto& s : instance.soft) soft_vars.push_back(s.literal.var());
  std::sort(soft_vars.begin(), soft_vars.end());
  soft_vars.erase(std::unique(soft_vars.begin(), soft_vars.end()), soft_vars.end());

  WeightedInstance current = instance;
  while (out.size() < limit) {
    auto r = solve_wpmaxsat(current);
    if (r.status != OptimumStatus::optimal || r.falsified_weight != optimum) break;
    out.push_back(r.assignment);
    if (soft_vars.empty()) break;
    Clause block;
    for (std::uint32_t v : soft_vars) {
      block.push_back(r.assignment[v] ? Literal::negative(v) : Literal::positive(v));
    }
    current.hard.push_back(std::move(block));
  }
  return out;
}

}  // namespace icsguard
