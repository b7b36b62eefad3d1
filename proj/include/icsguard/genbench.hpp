#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "icsguard/model.hpp"

namespace icsguard {

/// Seeded random source with platform-independent draws. The engine is
/// std::mt19937_64, whose output sequence is fixed by the standard; the
/// standard distributions are not, so integer and real draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi], by rejection.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// Uniform real in [0, 1) with 53 random bits.
  double unit();
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Derives independent seeds from a base seed and a list of coordinates.
std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

struct GenConfig {
  std::size_t size = 1;
  /// Percentages of atomic, AND and OR nodes among non-target nodes.
  int atomic_pct = 60;
  int and_pct = 20;
  int or_pct = 20;
  std::uint64_t seed = 1;
  int min_branch = 2;
  int max_branch = 3;

  /// Throws std::invalid_argument on a bad composition or branching range.
  void check() const;
};

/// Random acyclic AND/OR graph grown backwards from an atomic target "t".
/// Nodes are expanded breadth-first: atomic nodes get one predecessor,
/// connectors between min_branch and max_branch; kinds follow the
/// composition. Growth stops once the node count reaches `size`. Connectors
/// still unexpanded then draw inputs from existing source atomic nodes.
/// Atomic nodes cost 1; there are no measures.
Model generate_graph(const GenConfig& config);

struct AssignConfig {
  int measures_per_node = 0;
  double overlap = 0.0;
  /// Instance cost: `cost_lo` when equal to `cost_hi`, else uniform in range.
  std::int64_t cost_lo = 1;
  std::int64_t cost_hi = 1;
  std::uint64_t seed = 1;

  void check() const;
};

/// Adds `measures_per_node` rounds of instances. In each round atomic nodes
/// are visited in declaration order; the first mints a new instance, each
/// later one joins the previous node's instance with probability `overlap`
/// and otherwise mints its own. Instance ids are "s1", "s2", ...
Model assign_measures(const Model& model, const AssignConfig& config);

enum class BenchStatus { optimal, timeout, indestructible, error };
std::string_view to_string(BenchStatus status);

struct BenchRecord {
  std::size_t n = 0;
  int x = 0;
  double p = 0;
  int trial = 0;
  double encode_ms = 0;
  double solve_ms = 0;
  std::optional<Cost> total_cost;
  std::uint32_t vars = 0;
  std::size_t clauses = 0;
  BenchStatus status = BenchStatus::error;
};

struct BenchGrid {
  std::vector<std::size_t> sizes;
  std::vector<int> measures;
  std::vector<double> overlaps;
  int trials = 1;
  std::optional<double> timeout_s;
  int atomic_pct = 60;
  int and_pct = 20;
  int or_pct = 20;
  std::int64_t cost_lo = 1;
  std::int64_t cost_hi = 10;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// One record per (size, measures, overlap, trial), in that nesting order.
/// The graph depends only on (size, trial), so cells differing in measures
/// or overlap share it.
std::vector<BenchRecord> run_benchmark(const BenchGrid& grid);

/// Header `n,x,p,trial,encode_ms,solve_ms,total_cost,vars,clauses,status`.
void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out);

struct BenchCell {
  std::size_t n = 0;
  int x = 0;
  double p = 0;
  int trials = 0;
  int completed = 0;
  double mean_encode_ms = 0;
  double mean_solve_ms = 0;
  double median_solve_ms = 0;
  double mean_total_cost = 0;
};

/// Per-cell aggregates over completed trials, in first-appearance order.
std::vector<BenchCell> summarize_bench(const std::vector<BenchRecord>& records);
void write_bench_summary(const std::vector<BenchCell>& cells, std::ostream& out);

}  // namespace icsguard
