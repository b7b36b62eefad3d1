#include <doctest.h>

#include <algorithm>

#include "icsguard/metric.hpp"
#include "icsguard/oracle.hpp"
#include "support.hpp"

using namespace icsguard;

TEST_CASE("oracle on Case 2") {
  auto sol = brute_force_metric(testing::fixture("case2"));
  CHECK(sol.critical_nodes == std::vector<std::string>{"a", "c"});
  CHECK(sol.critical_measures == std::vector<std::string>{"s1", "s3"});
  CHECK(sol.total_cost == Cost::from_integer(7));
}

TEST_CASE("oracle on a single node") {
  Model m;
  m.nodes = {{"t", NodeKind::sensor, Cost::from_integer(5)}};
  m.target = "t";
  auto sol = brute_force_metric(m);
  CHECK(sol.critical_nodes == std::vector<std::string>{"t"});
  CHECK(sol.total_cost == Cost::from_integer(5));
}

TEST_CASE("oracle limits and failures") {
  GenConfig gen;
  gen.size = 80;
  Model big = generate_graph(gen);
  REQUIRE(testing::atomic_count(big) > 20);
  CHECK_THROWS_AS(brute_force_metric(big), TooLarge);
  CHECK_THROWS_AS(brute_force_metric(testing::fixture("case2"), 4), TooLarge);

  Model m;
  m.nodes = {{"t", NodeKind::actuator, Cost::infinite()}};
  m.target = "t";
  CHECK_THROWS_AS(brute_force_metric(m), TargetIndestructible);
}

TEST_CASE("oracle prefers fewer nodes on ties") {
  // {t} and {a, b} both cost 2.
  Model m;
  m.nodes = {{"a", NodeKind::sensor, Cost::from_integer(1)},
             {"b", NodeKind::sensor, Cost::from_integer(1)},
             {"g", NodeKind::or_connector, {}},
             {"t", NodeKind::actuator, Cost::from_integer(2)}};
  m.edges = {{"a", "g"}, {"b", "g"}, {"g", "t"}};
  m.target = "t";
  auto sol = brute_force_metric(m);
  CHECK(sol.critical_nodes == std::vector<std::string>{"t"});
}

TEST_CASE("oracle result is a true minimum over all disrupting subsets") {
  Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    Model m = testing::small_model(rng.next(), static_cast<int>(rng.uniform(0, 2)), rng.unit(), 8, 5);
    std::vector<std::string> atoms;
    for (const auto& n : m.nodes) {
      if (is_atomic(n.kind)) atoms.push_back(n.id);
    }
    Cost best = Cost::infinite();
    for (std::uint32_t mask = 1; mask < (1u << atoms.size()); ++mask) {
      std::vector<std::string> x;
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (mask >> k & 1u) x.push_back(atoms[k]);
      }
      if (!testing::target_works(m, x)) best = std::min(best, attack_cost(m, x));
    }
    if (best.is_infinite()) {
      CHECK_THROWS_AS(brute_force_metric(m), TargetIndestructible);
      continue;
    }
    auto sol = brute_force_metric(m);
    CHECK(sol.total_cost == best);
    CHECK(verify_solution(m, sol));
  }
}

TEST_CASE("oracle agrees with the solver on random models") {
  Rng rng(42);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    Model m = testing::small_model(rng.next(), static_cast<int>(rng.uniform(0, 3)), rng.unit(), 12, 8);
    std::optional<Cost> oracle;
    try {
      oracle = brute_force_metric(m).total_cost;
    } catch (const TargetIndestructible&) {
    }
    if (oracle) {
      CHECK(compute_metric(m).total_cost == *oracle);
      ++compared;
    } else {
      CHECK_THROWS_AS(compute_metric(m), TargetIndestructible);
    }
  }
  CHECK(compared > 150);
}
