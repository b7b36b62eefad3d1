// icsguard: minimum-cost disruption analysis for AND/OR dependency models.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "icsguard/genbench.hpp"
#include "icsguard/io.hpp"
#include "icsguard/metric.hpp"
#include "icsguard/oracle.hpp"

namespace {

using namespace icsguard;

enum Exit { kOk = 0, kAnalysis = 1, kInput = 2, kInternal = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ICSGUARD_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("ICSGUARD_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      auto v = std::stoll(text);
      return {v, v};
    }
    return {std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw InputError("bad range '" + text + "', expected lo..hi");
  }
}

void parse_composition(const std::string& text, int& a, int& b, int& c) {
  char s1 = 0, s2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> s1 >> b >> s2 >> c) || s1 != ',' || s2 != ',' || !(in >> std::ws).eof()) {
    throw InputError("bad composition '" + text + "', expected atomic,and,or");
  }
  if (a < 0 || b < 0 || c < 0 || a + b + c != 100) {
    throw InputError("composition '" + text + "' must be non-negative and sum to 100");
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

struct AnalyzeArgs {
  std::string model;
  std::string output;
  std::string format = "text";
  bool check_oracle = false;
  std::string wcnf;
  bool lenient = false;
  double timeout = 0;
};

int cmd_analyze(const AnalyzeArgs& args) {
  std::vector<std::string> warnings;
  Model model;
  try {
    model = read_model_file(args.model, ParseOptions{args.lenient}, &warnings);
  } catch (const ParseError& e) {
    std::cerr << args.model << ": " << e.what() << '\n';
    return kInput;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << '\n';
    return kInput;
  }
  for (const auto& w : warnings) std::cerr << args.model << ": warning: " << w << '\n';

  if (!args.wcnf.empty()) emit(export_wcnf(encode_metric(model).instance), args.wcnf);

  MetricOptions options;
  if (args.timeout > 0) {
    options.deadline = std::chrono::steady_clock::now() +
                       std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(args.timeout));
  }
  Solution sol;
  try {
    sol = compute_metric(model, options);
  } catch (const TargetIndestructible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAnalysis;
  } catch (const Interrupted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAnalysis;
  }

  if (args.check_oracle) {
    Solution ref;
    try {
      ref = brute_force_metric(model, 20);
    } catch (const TooLarge& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kInput;
    }
    if (ref.total_cost != sol.total_cost) {
      std::cerr << "oracle disagreement: solver " << sol.total_cost.to_string() << ", enumeration "
                << ref.total_cost.to_string() << '\n';
      return kInternal;
    }
    std::cerr << "oracle agrees: " << ref.total_cost.to_string() << '\n';
  }

  std::string report;
  if (args.format == "json") {
    report = format_json_report(model, sol);
  } else if (args.format == "dot") {
    report = export_dot(model, &sol);
  } else {
    report = format_text_report(model, sol);
  }
  emit(report, args.output);
  return kOk;
}

struct GenArgs {
  std::size_t size = 1;
  std::string config = "60,20,20";
  int measures = 0;
  double overlap = 0;
  std::string cost_range = "1..10";
  std::string branching = "2..3";
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  GenConfig gen;
  gen.size = args.size;
  parse_composition(args.config, gen.atomic_pct, gen.and_pct, gen.or_pct);
  auto [blo, bhi] = parse_range(args.branching);
  gen.min_branch = static_cast<int>(blo);
  gen.max_branch = static_cast<int>(bhi);
  gen.seed = args.seed ? *args.seed : default_seed();
  AssignConfig assign;
  assign.measures_per_node = args.measures;
  assign.overlap = args.overlap;
  std::tie(assign.cost_lo, assign.cost_hi) = parse_range(args.cost_range);
  assign.seed = mix_seed(gen.seed, {0x6d656173ULL});
  try {
    gen.check();
    assign.check();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  Model model = assign_measures(generate_graph(gen), assign);
  emit(write_model(model), args.out);

  std::map<std::string, std::size_t> kinds;
  for (const auto& n : model.nodes) ++kinds[std::string(to_string(n.kind))];
  std::ostream& info = args.out.empty() ? std::cerr : std::cout;
  info << "nodes: " << model.nodes.size();
  for (const auto& [kind, count] : kinds) info << ", " << kind << ": " << count;
  info << "\nedges: " << model.edges.size() << "\ninstances: " << model.measures.size() << '\n';
  return kOk;
}

struct BenchArgs {
  std::vector<std::size_t> sizes;
  std::vector<int> measures;
  std::vector<double> overlaps;
  int trials = 1;
  double timeout = 0;
  std::string out;
  std::string config = "60,20,20";
  std::string cost_range = "1..10";
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
};

int cmd_bench(const BenchArgs& args) {
  BenchGrid grid;
  grid.sizes = args.sizes;
  grid.measures = args.measures;
  grid.overlaps = args.overlaps;
  grid.trials = args.trials;
  if (args.timeout > 0) grid.timeout_s = args.timeout;
  parse_composition(args.config, grid.atomic_pct, grid.and_pct, grid.or_pct);
  std::tie(grid.cost_lo, grid.cost_hi) = parse_range(args.cost_range);
  grid.seed = args.seed ? *args.seed : default_seed();
  grid.workers = args.workers;
  for (double p : grid.overlaps) {
    if (!(p >= 0 && p <= 1)) throw InputError("overlap values must lie in [0, 1]");
  }
  for (int x : grid.measures) {
    if (x < 0) throw InputError("measure counts must be non-negative");
  }
  for (std::size_t n : grid.sizes) {
    if (n < 1) throw InputError("sizes must be positive");
  }
  if (grid.cost_lo < 0 || grid.cost_hi < grid.cost_lo) throw InputError("invalid cost range");

  auto records = run_benchmark(grid);
  auto cells = summarize_bench(records);
  std::ostringstream csv;
  write_bench_csv(records, csv);
  emit(csv.str(), args.out);
  if (!args.out.empty()) {
    std::ostringstream summary;
    write_bench_summary(cells, summary);
    emit(summary.str(), args.out + ".summary.csv");
  }

  std::ostream& info = args.out.empty() ? std::cerr : std::cout;
  bool any = false;
  for (const auto& c : cells) {
    any = any || c.completed > 0;
    info << "n=" << c.n << " x=" << c.x << " p=" << c.p << ": " << c.completed << '/' << c.trials
         << " solved, mean solve " << c.mean_solve_ms << " ms, mean cost " << c.mean_total_cost << '\n';
  }
  return records.empty() || any ? kOk : kAnalysis;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-cost disruption analysis for AND/OR dependency models"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Compute critical nodes and measures of a model");
  a->add_option("model", analyze.model, "Model file")->required();
  a->add_option("-o,--output", analyze.output, "Write the report here instead of stdout");
  a->add_option("-f,--format", analyze.format, "Report format")->check(CLI::IsMember({"text", "json", "dot"}));
  a->add_flag("--check-oracle", analyze.check_oracle, "Cross-check against exhaustive enumeration (<= 20 atoms)");
  a->add_option("--export-wcnf", analyze.wcnf, "Write the MaxSAT instance in WCNF");
  a->add_flag("--lenient", analyze.lenient, "Warn about unknown fields instead of failing");
  a->add_option("--timeout", analyze.timeout, "Solver time limit in seconds");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random model");
  g->add_option("--size", gen.size, "Approximate node count")->required();
  g->add_option("--config", gen.config, "Composition atomic,and,or in percent");
  g->add_option("--measures", gen.measures, "Measure instances per atomic node");
  g->add_option("--overlap", gen.overlap, "Probability of reusing the previous node's instance");
  g->add_option("--cost-range", gen.cost_range, "Instance cost lo..hi");
  g->add_option("--branching", gen.branching, "Connector inputs lo..hi");
  g->add_option("--seed", gen.seed, "Random seed (default: $ICSGUARD_SEED or 1)");
  g->add_option("--out", gen.out, "Output model file (default stdout)");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time the analysis on generated models");
  b->add_option("--sizes", bench.sizes, "Graph sizes")->delimiter(',');
  b->add_option("--measures", bench.measures, "Instances per node")->delimiter(',');
  b->add_option("--overlaps", bench.overlaps, "Overlap probabilities")->delimiter(',');
  b->add_option("--trials", bench.trials, "Trials per cell")->check(CLI::NonNegativeNumber);
  b->add_option("--timeout", bench.timeout, "Per-trial time limit in seconds");
  b->add_option("--out", bench.out, "CSV output (summary goes to <out>.summary.csv)");
  b->add_option("--config", bench.config, "Composition atomic,and,or in percent");
  b->add_option("--cost-range", bench.cost_range, "Instance cost lo..hi");
  b->add_option("--seed", bench.seed, "Random seed (default: $ICSGUARD_SEED or 1)");
  b->add_option("--workers", bench.workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*a) return cmd_analyze(analyze);
    if (*g) return cmd_gen(gen);
    if (*b) return cmd_bench(bench);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
