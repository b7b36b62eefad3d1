#include <doctest.h>

#include <set>

#include "icsguard/cnf.hpp"
#include "icsguard/maxsat.hpp"
#include "icsguard/metric.hpp"
#include "icsguard/sat_solver.hpp"
#include "support.hpp"

using namespace icsguard;

namespace {

Literal lit(int v) { return Literal::from_dimacs(v); }

std::vector<Clause> random_cnf(Rng& rng, int vars, int clauses, int width) {
  std::vector<Clause> out;
  for (int i = 0; i < clauses; ++i) {
    Clause c;
    for (int k = 0; k < width; ++k) {
      auto v = static_cast<std::int32_t>(rng.uniform(1, vars));
      c.push_back(lit(rng.chance(0.5) ? v : -v));
    }
    out.push_back(c);
  }
  return out;
}

bool satisfiable_by_enumeration(const std::vector<Clause>& clauses, int vars) {
  for (std::uint32_t mask = 0; mask < (1u << vars); ++mask) {
    bool all = true;
    for (const auto& c : clauses) {
      bool sat = false;
      for (Literal l : c) {
        if (((mask >> (l.var() - 1)) & 1u) != l.is_negative()) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

WeightedInstance random_instance(Rng& rng, std::uint32_t vars) {
  WeightedInstance inst;
  inst.var_count = vars;
  auto hard = random_cnf(rng, static_cast<int>(vars), static_cast<int>(rng.uniform(0, 2 * vars)),
                         static_cast<int>(rng.uniform(2, 3)));
  inst.hard = hard;
  for (std::int64_t k = rng.uniform(1, 2 * vars); k > 0; --k) {
    auto v = static_cast<std::int32_t>(rng.uniform(1, vars));
    std::uint64_t w = rng.chance(0.3) ? 1000 * static_cast<std::uint64_t>(rng.uniform(1, 5))
                                      : static_cast<std::uint64_t>(rng.uniform(1, 20));
    inst.soft.push_back({lit(rng.chance(0.5) ? v : -v), w});
  }
  return inst;
}

// Pigeons into holes: unsatisfiable and hard for resolution.
std::vector<Clause> pigeonhole(int holes) {
  const int pigeons = holes + 1;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  std::vector<Clause> out;
  for (int p = 0; p < pigeons; ++p) {
    Clause c;
    for (int h = 0; h < holes; ++h) c.push_back(lit(var(p, h)));
    out.push_back(c);
  }
  for (int h = 0; h < holes; ++h) {
    for (int p = 0; p < pigeons; ++p) {
      for (int q = p + 1; q < pigeons; ++q) out.push_back({lit(-var(p, h)), lit(-var(q, h))});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("solve_sat on trivial inputs") {
  auto model = solve_sat({{lit(1)}}, 1);
  REQUIRE(model.has_value());
  CHECK((*model)[1]);
  CHECK_FALSE(solve_sat({{lit(1)}, {lit(-1)}}, 1).has_value());
  CHECK(solve_sat({}, 3).has_value());
}

TEST_CASE("solve_sat agrees with enumeration on random 3-CNF at 20 variables") {
  Rng rng(21);
  int sat = 0;
  for (int i = 0; i < 12; ++i) {
    auto clauses = random_cnf(rng, 20, 60 + 15 * (i % 4), 3);
    auto model = solve_sat(clauses, 20);
    const bool expected = satisfiable_by_enumeration(clauses, 20);
    REQUIRE(model.has_value() == expected);
    if (model) {
      CHECK(satisfies(clauses, *model));
      ++sat;
    }
  }
  CHECK(sat > 0);
  CHECK(sat < 12);
}

TEST_CASE("solve_sat agrees with enumeration on many small random formulas") {
  Rng rng(22);
  for (int i = 0; i < 2000; ++i) {
    int vars = static_cast<int>(rng.uniform(1, 10));
    auto clauses = random_cnf(rng, vars, static_cast<int>(rng.uniform(1, 5 * vars)), static_cast<int>(rng.uniform(1, 3)));
    auto model = solve_sat(clauses, static_cast<std::uint32_t>(vars));
    REQUIRE(model.has_value() == satisfiable_by_enumeration(clauses, vars));
    if (model) CHECK(satisfies(clauses, *model));
  }
}

TEST_CASE("assumptions and failed-assumption cores") {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const int vars = 8;
    auto clauses = random_cnf(rng, vars, 12, 3);
    SatSolver s;
    s.ensure_vars(vars);
    for (const auto& c : clauses) s.add_clause(c);
    std::vector<Literal> assumptions;
    for (int v = 1; v <= vars; ++v) {
      if (rng.chance(0.6)) assumptions.push_back(lit(rng.chance(0.5) ? v : -v));
    }
    auto with = clauses;
    for (Literal a : assumptions) with.push_back({a});
    const bool expected = satisfiable_by_enumeration(with, vars);
    auto r = s.solve(assumptions);
    REQUIRE((r == SatSolver::Result::sat) == expected);
    if (r == SatSolver::Result::sat) {
      auto m = s.model();
      CHECK(satisfies(clauses, m));
      for (Literal a : assumptions) CHECK(m[a.var()] != a.is_negative());
    } else {
      const auto& core = s.core();
      for (Literal c : core) CHECK(std::find(assumptions.begin(), assumptions.end(), c) != assumptions.end());
      auto restricted = clauses;
      for (Literal c : core) restricted.push_back({c});
      CHECK_FALSE(satisfiable_by_enumeration(restricted, vars));
    }
  }
}

TEST_CASE("the solver is incremental across calls") {
  SatSolver s;
  s.add_clause({lit(1), lit(2)});
  CHECK(s.solve() == SatSolver::Result::sat);
  s.add_clause({lit(-1)});
  CHECK(s.solve() == SatSolver::Result::sat);
  CHECK(s.model_value(2));
  CHECK(s.solve(std::vector<Literal>{lit(-2)}) == SatSolver::Result::unsat);
  CHECK(s.core() == std::vector<Literal>{lit(-2)});
  CHECK(s.solve() == SatSolver::Result::sat);
  s.add_clause({lit(-2)});
  CHECK(s.solve() == SatSolver::Result::unsat);
  CHECK_FALSE(s.okay());
}

TEST_CASE("pigeonhole instances are refuted, and a past deadline stops the search") {
  CHECK_FALSE(solve_sat(pigeonhole(5), 30).has_value());
  SatSolver s;
  for (const auto& c : pigeonhole(10)) s.add_clause(c);
  s.set_deadline(std::chrono::steady_clock::now());
  CHECK(s.solve() == SatSolver::Result::unknown);
}

TEST_CASE("solve_wpmaxsat picks the cheaper side of a two-way choice") {
  WeightedInstance inst;
  inst.var_count = 2;
  inst.hard = {{lit(-1), lit(-2)}};
  inst.soft = {{lit(1), 5}, {lit(2), 3}};
  auto r = solve_wpmaxsat(inst);
  REQUIRE(r.status == OptimumStatus::optimal);
  CHECK(r.assignment[1]);
  CHECK_FALSE(r.assignment[2]);
  CHECK(r.falsified_weight == 3);
}

TEST_CASE("solve_wpmaxsat on the Case 2 encoding costs 7000") {
  auto enc = encode_metric(testing::fixture("case2"));
  auto r = solve_wpmaxsat(enc.instance);
  REQUIRE(r.status == OptimumStatus::optimal);
  CHECK(r.falsified_weight == 7000);
  CHECK(satisfies(enc.instance.hard, r.assignment));
}

TEST_CASE("solve_wpmaxsat reports unsatisfiable hard clauses") {
  WeightedInstance inst;
  inst.var_count = 2;
  inst.hard = {{lit(1)}, {lit(2)}, {lit(-1), lit(-2)}};
  inst.soft = {{lit(1), 4}};
  CHECK(solve_wpmaxsat(inst).status == OptimumStatus::hard_unsat);
}

TEST_CASE("instance checks reject malformed input") {
  WeightedInstance inst;
  inst.var_count = 1;
  inst.soft = {{lit(1), 0}};
  CHECK_THROWS_AS(solve_wpmaxsat(inst), std::invalid_argument);
  inst.soft = {{lit(2), 1}};
  CHECK_THROWS_AS(solve_wpmaxsat(inst), std::invalid_argument);
  inst.soft.clear();
  inst.hard = {{}};
  CHECK_THROWS_AS(solve_wpmaxsat(inst), std::invalid_argument);
}

TEST_CASE("solve_wpmaxsat is exact on random instances up to 18 variables") {
  Rng rng(24);
  for (int i = 0; i < 400; ++i) {
    auto vars = static_cast<std::uint32_t>(rng.uniform(1, i < 350 ? 10 : 18));
    WeightedInstance inst = random_instance(rng, vars);
    auto expected = testing::brute_force_maxsat(inst);
    for (bool stratify : {true, false}) {
      for (bool trim : {true, false}) {
        MaxSatOptions options;
        options.stratify = stratify;
        options.trim_cores = trim;
        auto r = solve_wpmaxsat(inst, options);
        if (!expected) {
          REQUIRE(r.status == OptimumStatus::hard_unsat);
          continue;
        }
        REQUIRE(r.status == OptimumStatus::optimal);
        REQUIRE(r.falsified_weight == *expected);
        CHECK(satisfies(inst.hard, r.assignment));
        CHECK(falsified_weight(inst, r.assignment) == r.falsified_weight);
      }
    }
  }
}

TEST_CASE("adding soft clauses or raising weights never lowers the optimum") {
  Rng rng(25);
  for (int i = 0; i < 200; ++i) {
    WeightedInstance inst = random_instance(rng, static_cast<std::uint32_t>(rng.uniform(2, 12)));
    auto base = solve_wpmaxsat(inst);
    if (base.status != OptimumStatus::optimal) continue;
    WeightedInstance more = inst;
    auto v = static_cast<std::int32_t>(rng.uniform(1, inst.var_count));
    more.soft.push_back({lit(rng.chance(0.5) ? v : -v), static_cast<std::uint64_t>(rng.uniform(1, 9))});
    CHECK(solve_wpmaxsat(more).falsified_weight >= base.falsified_weight);
    WeightedInstance heavier = inst;
    heavier.soft[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(inst.soft.size()) - 1))].weight += 7;
    CHECK(solve_wpmaxsat(heavier).falsified_weight >= base.falsified_weight);
    CHECK(solve_wpmaxsat(inst).falsified_weight == base.falsified_weight);
  }
}

TEST_CASE("enumerate_optima lists every optimal projection") {
  Rng rng(26);
  for (int i = 0; i < 100; ++i) {
    WeightedInstance inst = random_instance(rng, static_cast<std::uint32_t>(rng.uniform(1, 7)));
    auto best = testing::brute_force_maxsat(inst);
    auto all = enumerate_optima(inst, 1000);
    if (!best) {
      CHECK(all.empty());
      continue;
    }
    std::set<std::uint32_t> soft_vars;
    for (const auto& s : inst.soft) soft_vars.insert(s.literal.var());
    // Count optimal projections by brute force.
    std::set<std::vector<bool>> expected;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst.var_count); ++mask) {
      std::vector<bool> a(inst.var_count + 1, false);
      for (std::uint32_t v = 1; v <= inst.var_count; ++v) a[v] = mask >> (v - 1) & 1u;
      if (!satisfies(inst.hard, a) || falsified_weight(inst, a) != *best) continue;
      std::vector<bool> proj;
      for (auto v : soft_vars) proj.push_back(a[v]);
      expected.insert(proj);
    }
    std::set<std::vector<bool>> got;
    for (const auto& a : all) {
      CHECK(falsified_weight(inst, a) == *best);
      std::vector<bool> proj;
      for (auto v : soft_vars) proj.push_back(a[v]);
      got.insert(proj);
    }
    CHECK(got.size() == all.size());
    CHECK(got == expected);
  }
}

TEST_CASE("complementary assumptions form a core together") {
  SatSolver s;
  s.ensure_vars(3);
  CHECK(s.solve(std::vector<Literal>{lit(1), lit(2), lit(-2)}) == SatSolver::Result::unsat);
  CHECK(std::set<Literal>(s.core().begin(), s.core().end()) == std::set<Literal>{lit(2), lit(-2)});
  CHECK(s.solve(std::vector<Literal>{lit(3), lit(3), lit(-3)}) == SatSolver::Result::unsat);
  CHECK(std::set<Literal>(s.core().begin(), s.core().end()) == std::set<Literal>{lit(3), lit(-3)});
}
