#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "icsguard/cnf.hpp"

namespace icsguard {

/// Conflict-driven clause-learning SAT solver (two watched literals, VSIDS,
/// phase saving, first-UIP learning with recursive minimisation, Luby
/// restarts). Incremental: clauses and variables may be added between
/// solves, and each solve may carry assumptions. Fully deterministic.
///
/// Not thread-safe; use one instance per thread.
class SatSolver {
 public:
  enum class Result { sat, unsat, unknown };
  using Clock = std::chrono::steady_clock;

  struct Stats {
    std::uint64_t solves = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
  };

  SatSolver() = default;
  SatSolver(const SatSolver&) = delete;
  SatSolver& operator=(const SatSolver&) = delete;

  std::uint32_t var_count() const { return static_cast<std::uint32_t>(assign_.size()); }
  /// Returns the new variable's index (1-based).
  std::uint32_t new_var();
  void ensure_vars(std::uint32_t count);

  /// Adds a clause; variables are created on demand. Returns false once the
  /// clause database is unsatisfiable without assumptions.
  bool add_clause(std::span<const Literal> clause);
  bool add_clause(std::initializer_list<Literal> clause) {
    return add_clause(std::span<const Literal>(clause.begin(), clause.size()));
  }

  Result solve(std::span<const Literal> assumptions = {});

  /// Value of `var` in the last model (valid after Result::sat).
  bool model_value(std::uint32_t var) const { return model_[var - 1]; }
  /// Model indexed by variable, slot 0 unused.
  std::vector<bool> model() const;
  /// After Result::unsat: assumptions that are jointly inconsistent with the
  /// clauses. Empty when the clauses alone are unsatisfiable.
  const std::vector<Literal>& core() const { return core_; }

  void set_deadline(std::optional<Clock::time_point> deadline) { deadline_ = deadline; }
  void set_interrupt_flag(const std::atomic<bool>* flag) { interrupt_ = flag; }

  const Stats& stats() const { return stats_; }
  bool okay() const { return ok_; }

 private:
  using Lit = std::uint32_t;  // 2 * var + sign
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xffffffffu;
  static constexpr Lit kNoLit = 0xffffffffu;
  static constexpr std::int8_t kFalse = 0, kTrue = 1, kUndef = 2;

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  static Lit encode(Literal l) { return 2 * (l.var() - 1) + (l.is_negative() ? 1u : 0u); }
  static Literal decode(Lit l) {
    return l & 1u ? Literal::negative((l >> 1) + 1) : Literal::positive((l >> 1) + 1);
  }
  std::int8_t value(Lit l) const {
    std::int8_t a = assign_[l >> 1];
    return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ static_cast<std::int8_t>(l & 1u));
  }
  std::uint32_t level(std::uint32_t var) const { return level_[var]; }
  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  // clause arena: [size][flags|lbd<<2][activity bits][lits...]
  std::uint32_t clause_size(CRef c) const { return arena_[c]; }
  Lit* clause_lits(CRef c) { return &arena_[c + 3]; }
  const Lit* clause_lits(CRef c) const { return &arena_[c + 3]; }
  bool clause_learnt(CRef c) const { return arena_[c + 1] & 1u; }
  bool clause_deleted(CRef c) const { return arena_[c + 1] & 2u; }
  std::uint32_t clause_lbd(CRef c) const { return arena_[c + 1] >> 2; }
  float clause_activity(CRef c) const;
  void set_clause_activity(CRef c, float a);
  CRef alloc_clause(std::span<const Lit> lits, bool learnt, std::uint32_t lbd);

  void attach(CRef c);
  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<Lit>& learnt, std::uint32_t& bt_level, std::uint32_t& lbd);
  bool redundant(Lit l, std::uint32_t abstract_levels);
  void analyze_final(Lit failed);
  void cancel_until(std::uint32_t level);
  Lit pick_branch();
  Result search(std::uint64_t conflict_limit);
  void reduce_learnts();
  void collect_garbage();
  bool locked(CRef c) const;
  bool out_of_time();

  void bump_var(std::uint32_t v);
  void bump_clause(CRef c);

  // binary max-heap over variable activity
  void heap_insert(std::uint32_t v);
  void heap_up(std::uint32_t pos);
  void heap_down(std::uint32_t pos);
  std::uint32_t heap_pop();
  bool heap_contains(std::uint32_t v) const { return heap_pos_[v] != kNotInHeap; }
  static constexpr std::uint32_t kNotInHeap = 0xffffffffu;

  bool ok_ = true;
  std::vector<std::uint32_t> arena_;
  std::uint64_t wasted_ = 0;
  std::vector<CRef> originals_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;

  std::vector<std::int8_t> assign_;
  std::vector<std::uint32_t> level_;
  std::vector<CRef> reason_;
  std::vector<std::uint8_t> polarity_;  // saved phase: 1 = negative
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<std::uint32_t> heap_;
  std::vector<std::uint32_t> heap_pos_;

  std::vector<Lit> assumptions_;
  std::vector<Literal> core_;
  std::vector<bool> model_;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_toclear_;

  double var_inc_ = 1.0;
  double var_decay_ = 0.95;
  float clause_inc_ = 1.0f;
  float clause_decay_ = 0.999f;
  double max_learnts_ = 0;

  std::optional<Clock::time_point> deadline_;
  const std::atomic<bool>* interrupt_ = nullptr;
  bool timed_out_ = false;
  Stats stats_;
};

/// Convenience wrapper: the model (indexed by variable, slot 0 unused) or
/// nullopt when the clauses are unsatisfiable under the assumptions.
std::optional<std::vector<bool>> solve_sat(const std::vector<Clause>& clauses, std::uint32_t var_count,
                                           std::span<const Literal> assumptions = {});

}  // namespace icsguard
