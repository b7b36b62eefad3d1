#include "icsguard/genbench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "icsguard/metric.hpp"

namespace icsguard {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("Rng::uniform: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) return static_cast<std::int64_t>(next());
  const std::uint64_t bound = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = next();
  } while (draw >= limit);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + draw % bound);
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t mix_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = splitmix(base);
  for (std::uint64_t p : parts) h = splitmix(h ^ p);
  return h;
}

void GenConfig::check() const {
  if (size < 1) throw std::invalid_argument("size must be at least 1");
  if (atomic_pct < 0 || and_pct < 0 || or_pct < 0 || atomic_pct + and_pct + or_pct != 100) {
    throw std::invalid_argument("composition must be three non-negative percentages summing to 100");
  }
  if (min_branch < 1 || max_branch < min_branch) throw std::invalid_argument("invalid branching range");
}

void AssignConfig::check() const {
  if (measures_per_node < 0) throw std::invalid_argument("measures per node must be non-negative");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw std::invalid_argument("overlap must lie in [0, 1]");
  if (cost_lo < 0 || cost_hi < cost_lo) throw std::invalid_argument("invalid cost range");
}

namespace {

NodeKind random_atomic_kind(Rng& rng) {
  static constexpr NodeKind kinds[] = {NodeKind::sensor, NodeKind::actuator, NodeKind::agent};
  return kinds[rng.uniform(0, 2)];
}

}  // namespace

Model generate_graph(const GenConfig& config) {
  config.check();
  Rng rng(config.seed);
  Model model;
  model.target = "t";

  auto add_node = [&](NodeKind kind, std::string id) {
    Node node{std::move(id), kind, is_atomic(kind) ? Cost::from_integer(1) : Cost()};
    model.nodes.push_back(std::move(node));
    return model.nodes.size() - 1;
  };
  auto draw_kind = [&] {
    std::int64_t roll = rng.uniform(0, 99);
    if (roll < config.atomic_pct) return random_atomic_kind(rng);
    if (roll < config.atomic_pct + config.and_pct) return NodeKind::and_connector;
    return NodeKind::or_connector;
  };

  add_node(random_atomic_kind(rng), "t");
  std::size_t next_id = 1;
  std::deque<std::size_t> frontier{0};
  while (model.nodes.size() < config.size && !frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop_front();
    const std::int64_t children =
        is_atomic(model.nodes[v].kind) ? 1 : rng.uniform(config.min_branch, config.max_branch);
    for (std::int64_t c = 0; c < children; ++c) {
      std::size_t child = add_node(draw_kind(), "v" + std::to_string(next_id++));
      model.edges.push_back({model.nodes[child].id, model.nodes[v].id});
      frontier.push_back(child);
    }
  }

  // Connectors left without inputs take them from atomic source nodes; an
  // edge out of a node without predecessors can never close a cycle.
  std::vector<bool> has_pred(model.nodes.size(), false);
  {
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < model.nodes.size(); ++i) index.emplace(model.nodes[i].id, i);
    for (const auto& e : model.edges) has_pred[index.at(e.to)] = true;
  }
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    if (is_atomic(model.nodes[i].kind) && !has_pred[i]) sources.push_back(i);
  }
  for (std::size_t v : frontier) {
    if (is_atomic(model.nodes[v].kind)) continue;
    auto wanted = static_cast<std::size_t>(rng.uniform(config.min_branch, config.max_branch));
    while (sources.size() < wanted) {
      sources.push_back(add_node(random_atomic_kind(rng), "v" + std::to_string(next_id++)));
    }
    std::vector<std::size_t> pool = sources;
    for (std::size_t c = 0; c < wanted; ++c) {
      auto pick = static_cast<std::size_t>(rng.uniform(static_cast<std::int64_t>(c),
                                                       static_cast<std::int64_t>(pool.size()) - 1));
      std::swap(pool[c], pool[pick]);
      model.edges.push_back({model.nodes[pool[c]].id, model.nodes[v].id});
    }
  }
  return model;
}

Model assign_measures(const Model& model, const AssignConfig& config) {
  config.check();
  Rng rng(config.seed);
  Model out = model;

  std::unordered_set<std::string> taken;
  for (const auto& n : model.nodes) taken.insert(n.id);
  for (const auto& m : model.measures) taken.insert(m.id);
  std::size_t counter = 0;
  auto fresh_id = [&] {
    std::string id;
    do {
      id = "s" + std::to_string(++counter);
    } while (taken.count(id));
    taken.insert(id);
    return id;
  };

  for (int round = 0; round < config.measures_per_node; ++round) {
    std::optional<std::size_t> previous;
    for (const auto& node : model.nodes) {
      if (!is_atomic(node.kind)) continue;
      const bool reuse = rng.chance(config.overlap);
      if (previous && reuse) {
        out.measures[*previous].range.push_back(node.id);
        continue;
      }
      MeasureInstance m;
      m.id = fresh_id();
      m.type = "M" + std::to_string(round + 1);
      m.cost = Cost::from_integer(config.cost_lo == config.cost_hi ? config.cost_lo
                                                                   : rng.uniform(config.cost_lo, config.cost_hi));
      m.range.push_back(node.id);
      out.measures.push_back(std::move(m));
      previous = out.measures.size() - 1;
    }
  }
  return out;
}

std::string_view to_string(BenchStatus status) {
  switch (status) {
    case BenchStatus::optimal: return "optimal";
    case BenchStatus::timeout: return "timeout";
    case BenchStatus::indestructible: return "indestructible";
    case BenchStatus::error: return "error";
  }
  return "error";
}

namespace {

BenchRecord run_cell(const BenchGrid& grid, std::size_t n, int x, std::size_t p_index, int trial) {
  BenchRecord rec;
  rec.n = n;
  rec.x = x;
  rec.p = grid.overlaps[p_index];
  rec.trial = trial;
  try {
    GenConfig gen;
    gen.size = n;
    gen.atomic_pct = grid.atomic_pct;
    gen.and_pct = grid.and_pct;
    gen.or_pct = grid.or_pct;
    gen.seed = mix_seed(grid.seed, {n, static_cast<std::uint64_t>(trial)});
    AssignConfig assign;
    assign.measures_per_node = x;
    assign.overlap = rec.p;
    assign.cost_lo = grid.cost_lo;
    assign.cost_hi = grid.cost_hi;
    assign.seed = mix_seed(grid.seed, {n, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(x), p_index + 1});
    Model model = assign_measures(generate_graph(gen), assign);

    MetricOptions options;
    if (grid.timeout_s) {
      options.deadline = std::chrono::steady_clock::now() +
                         std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(*grid.timeout_s));
    }
    Solution sol = compute_metric(model, options);
    rec.encode_ms = sol.stats.encode_ms;
    rec.solve_ms = sol.stats.solve_ms;
    rec.vars = sol.stats.vars;
    rec.clauses = sol.stats.clauses;
    rec.total_cost = sol.total_cost;
    rec.status = BenchStatus::optimal;
  } catch (const Interrupted&) {
    rec.status = BenchStatus::timeout;
  } catch (const TargetIndestructible&) {
    rec.status = BenchStatus::indestructible;
  } catch (const std::exception&) {
    rec.status = BenchStatus::error;
  }
  return rec;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_ms(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 3);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchGrid& grid) {
  struct Task {
    std::size_t n;
    int x;
    std::size_t p_index;
    int trial;
  };
  std::vector<Task> tasks;
  for (std::size_t n : grid.sizes) {
    for (int x : grid.measures) {
      for (std::size_t pi = 0; pi < grid.overlaps.size(); ++pi) {
        for (int trial = 0; trial < grid.trials; ++trial) tasks.push_back({n, x, pi, trial});
      }
    }
  }
  std::vector<BenchRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      records[i] = run_cell(grid, tasks[i].n, tasks[i].x, tasks[i].p_index, tasks[i].trial);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(grid.workers, static_cast<unsigned>(tasks.size())));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < count; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return records;
}

void write_bench_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  out << "n,x,p,trial,encode_ms,solve_ms,total_cost,vars,clauses,status\n";
  for (const auto& r : records) {
    out << r.n << ',' << r.x << ',' << format_double(r.p) << ',' << r.trial << ',' << format_ms(r.encode_ms) << ','
        << format_ms(r.solve_ms) << ',' << (r.total_cost ? r.total_cost->to_string() : std::string()) << ','
        << r.vars << ',' << r.clauses << ',' << to_string(r.status) << '\n';
  }
}

std::vector<BenchCell> summarize_bench(const std::vector<BenchRecord>& records) {
  std::vector<BenchCell> cells;
  std::vector<std::vector<const BenchRecord*>> members;
  for (const auto& r : records) {
    auto it = std::find_if(cells.begin(), cells.end(),
                           [&](const BenchCell& c) { return c.n == r.n && c.x == r.x && c.p == r.p; });
    if (it == cells.end()) {
      cells.push_back({r.n, r.x, r.p});
      members.emplace_back();
      it = cells.end() - 1;
    }
    ++it->trials;
    if (r.status == BenchStatus::optimal) members[static_cast<std::size_t>(it - cells.begin())].push_back(&r);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& c = cells[i];
    const auto& done = members[i];
    c.completed = static_cast<int>(done.size());
    if (done.empty()) continue;
    std::vector<double> solve;
    for (const auto* r : done) {
      c.mean_encode_ms += r->encode_ms;
      c.mean_solve_ms += r->solve_ms;
      c.mean_total_cost += static_cast<double>(r->total_cost->millis()) / Cost::kScale;
      solve.push_back(r->solve_ms);
    }
    const auto k = static_cast<double>(done.size());
    c.mean_encode_ms /= k;
    c.mean_solve_ms /= k;
    c.mean_total_cost /= k;
    std::sort(solve.begin(), solve.end());
    const std::size_t mid = solve.size() / 2;
    c.median_solve_ms = solve.size() % 2 ? solve[mid] : (solve[mid - 1] + solve[mid]) / 2;
  }
  return cells;
}

void write_bench_summary(const std::vector<BenchCell>& cells, std::ostream& out) {
  out << "n,x,p,trials,completed,mean_encode_ms,mean_solve_ms,median_solve_ms,mean_total_cost\n";
  for (const auto& c : cells) {
    out << c.n << ',' << c.x << ',' << format_double(c.p) << ',' << c.trials << ',' << c.completed << ','
        << format_ms(c.mean_encode_ms) << ',' << format_ms(c.mean_solve_ms) << ',' << format_ms(c.median_solve_ms)
        << ',' << format_ms(c.mean_total_cost) << '\n';
  }
}

}  // namespace icsguard
