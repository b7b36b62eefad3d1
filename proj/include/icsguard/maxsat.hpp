#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icsguard/cnf.hpp"

namespace icsguard {

/// A soft unit clause: `literal` should hold; falsifying it costs `weight`.
struct SoftLiteral {
  Literal literal;
  std::uint64_t weight = 1;
};

/// Weighted partial MAX-SAT: hard clauses plus weighted soft unit clauses.
struct WeightedInstance {
  std::vector<Clause> hard;
  std::vector<SoftLiteral> soft;
  std::uint32_t var_count = 0;
  /// Optional variable names (index 1..var_count; empty for auxiliaries).
  std::vector<std::string> names;

  /// Throws std::invalid_argument when a weight is zero, a literal is out of
  /// range or a hard clause is empty.
  void check() const;
  std::uint64_t total_soft_weight() const;
};

enum class OptimumStatus { optimal, hard_unsat, interrupted };

struct OptimumResult {
  OptimumStatus status = OptimumStatus::interrupted;
  /// Total assignment indexed by variable, slot 0 unused.
  std::vector<bool> assignment;
  std::uint64_t falsified_weight = 0;

  struct Stats {
    std::uint64_t sat_calls = 0;
    std::uint64_t cores = 0;
    std::uint64_t lower_bound = 0;
  } stats;
};

struct MaxSatOptions {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Solve heavy soft clauses first, adding lighter weight levels as the
  /// heavier ones are settled.
  bool stratify = true;
  /// Re-solve each core under its own assumptions to shrink it.
  bool trim_cores = true;
};

/// Exact optimum by core-guided search (OLL with incremental totalizers,
/// weight stratification and hardening against the best model found).
OptimumResult solve_wpmaxsat(const WeightedInstance& instance, const MaxSatOptions& options = {});

/// Sum of weights of soft literals falsified by `assignment`.
std::uint64_t falsified_weight(const WeightedInstance& instance, const std::vector<bool>& assignment);

/// Every optimum, projected onto the soft-clause variables, up to `limit`
/// distinct projections. Intended for small instances in tests.
std::vector<std::vector<bool>> enumerate_optima(const WeightedInstance& instance, std::size_t limit);

}  // namespace icsguard
