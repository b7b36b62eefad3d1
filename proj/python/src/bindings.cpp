#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "icsguard/genbench.hpp"
#include "icsguard/io.hpp"
#include "icsguard/metric.hpp"
#include "icsguard/oracle.hpp"

namespace py = pybind11;
using namespace icsguard;

namespace {

double as_float(const Cost& c) {
  if (c.is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(c.millis()) / Cost::kScale;
}

py::dict solution_dict(const Solution& sol) {
  py::dict d;
  d["critical_nodes"] = sol.critical_nodes;
  d["critical_measures"] = sol.critical_measures;
  d["total_cost"] = as_float(sol.total_cost);
  py::dict stats;
  stats["encode_ms"] = sol.stats.encode_ms;
  stats["solve_ms"] = sol.stats.solve_ms;
  stats["vars"] = sol.stats.vars;
  stats["clauses"] = sol.stats.clauses;
  d["stats"] = stats;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimum-cost disruption analysis for AND/OR dependency models";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvalidModel>(m, "InvalidModel", PyExc_ValueError);
  py::register_exception<TooLarge>(m, "TooLarge", PyExc_ValueError);
  py::register_exception<RatingOutOfRange>(m, "RatingOutOfRange", PyExc_ValueError);
  py::register_exception<TargetIndestructible>(m, "TargetIndestructible", PyExc_RuntimeError);

  py::class_<Model>(m, "Model")
      .def_property_readonly("target", [](const Model& mo) { return mo.target; })
      .def_property_readonly("nodes",
                             [](const Model& mo) {
                               py::list out;
                               for (const auto& n : mo.nodes) {
                                 out.append(py::make_tuple(n.id, std::string(to_string(n.kind)), as_float(n.cost)));
                               }
                               return out;
                             })
      .def_property_readonly("edges",
                             [](const Model& mo) {
                               py::list out;
                               for (const auto& e : mo.edges) out.append(py::make_tuple(e.from, e.to));
                               return out;
                             })
      .def_property_readonly("measures",
                             [](const Model& mo) {
                               py::list out;
                               for (const auto& s : mo.measures) {
                                 out.append(py::make_tuple(s.id, s.type, as_float(s.cost), s.range));
                               }
                               return out;
                             })
      .def("__eq__", [](const Model& a, const Model& b) { return structurally_equal(a, b); })
      .def("__repr__", [](const Model& mo) {
        return "<Model target=" + mo.target + " nodes=" + std::to_string(mo.nodes.size()) +
               " measures=" + std::to_string(mo.measures.size()) + ">";
      });

  m.def(
      "parse_model", [](const std::string& text, bool lenient) { return parse_model(text, ParseOptions{lenient}); },
      py::arg("text"), py::arg("lenient") = false, "Parse and validate a JSON model document.");
  m.def(
      "load_model", [](const std::string& path) { return read_model_file(path); }, py::arg("path"));
  m.def("write_model", &write_model, py::arg("model"), "Canonical JSON document for a model.");
  m.def(
      "validate",
      [](const Model& mo) {
        std::vector<std::string> out;
        for (const auto& v : validate_model(mo)) out.push_back(v.message());
        return out;
      },
      py::arg("model"));
  m.def(
      "analyze",
      [](const Model& mo, double timeout) {
        MetricOptions options;
        if (timeout > 0) {
          options.deadline = std::chrono::steady_clock::now() +
                             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(timeout));
        }
        Solution sol;
        {
          py::gil_scoped_release release;
          sol = compute_metric(mo, options);
        }
        return solution_dict(sol);
      },
      py::arg("model"), py::arg("timeout") = 0.0,
      "Minimum-cost critical nodes and measures; raises TargetIndestructible.");
  m.def(
      "brute_force", [](const Model& mo, std::size_t max_atoms) { return solution_dict(brute_force_metric(mo, max_atoms)); },
      py::arg("model"), py::arg("max_atoms") = 20);
  m.def(
      "generate",
      [](std::size_t size, std::tuple<int, int, int> composition, int measures, double overlap,
         std::int64_t cost_lo, std::int64_t cost_hi, std::uint64_t seed) {
        GenConfig gen;
        gen.size = size;
        std::tie(gen.atomic_pct, gen.and_pct, gen.or_pct) = composition;
        gen.seed = seed;
        AssignConfig assign;
        assign.measures_per_node = measures;
        assign.overlap = overlap;
        assign.cost_lo = cost_lo;
        assign.cost_hi = cost_hi;
        assign.seed = mix_seed(seed, {0x6d656173ULL});
        return assign_measures(generate_graph(gen), assign);
      },
      py::arg("size"), py::arg("composition") = std::make_tuple(60, 20, 20), py::arg("measures") = 0,
      py::arg("overlap") = 0.0, py::arg("cost_lo") = 1, py::arg("cost_hi") = 10, py::arg("seed") = 1);
  m.def(
      "export_wcnf", [](const Model& mo) { return export_wcnf(encode_metric(mo).instance); }, py::arg("model"));
  m.def(
      "export_dot",
      [](const Model& mo, bool highlight) {
        if (!highlight) return export_dot(mo);
        Solution sol = compute_metric(mo);
        return export_dot(mo, &sol);
      },
      py::arg("model"), py::arg("highlight") = false);
  m.def(
      "measure_cost_from_ratings",
      [](int f1, int f2, int f3) { return as_float(measure_cost_from_ratings(f1, f2, f3)); }, py::arg("skills"),
      py::arg("tools"), py::arg("time"));
}
