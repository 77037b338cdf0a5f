#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mafclt/coefficients.hpp"
#include "mafclt/config.hpp"
#include "mafclt/errors.hpp"
#include "mafclt/harness.hpp"
#include "mafclt/m2_metric.hpp"
#include "mafclt/ma_paths.hpp"
#include "mafclt/stable_limit.hpp"
#include "mafclt/tails.hpp"

namespace py = pybind11;
using namespace mafclt;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string report_text(const Report& r) {
    json j = to_json(r);
    j["wall_time_seconds"] = r.wall_time_seconds;
    json tables = json::array();
    for (const Table& t : r.tables) tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
    j["tables"] = tables;
    return j.dump();
}

ExperimentConfig parse_config(const std::string& text) { return config_from_json(json::parse(text)); }

TruncationSide parse_side(const std::string& s) {
    if (s == "le") return TruncationSide::le;
    if (s == "gt") return TruncationSide::gt;
    throw DomainError("side must be 'le' or 'gt'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heavy-tailed moving averages: innovations, paths, the M2 metric and stable limits";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<EstimationError>(m, "EstimationError", PyExc_RuntimeError);

    py::class_<TailSpec>(m, "TailSpec")
        .def(py::init([](double alpha, double p) { return TailSpec::regular(alpha, p); }), py::arg("alpha"),
             py::arg("p") = 0.5)
        .def_property_readonly("alpha", &TailSpec::alpha)
        .def_property_readonly("p", &TailSpec::p)
        .def_property_readonly("r", &TailSpec::r)
        .def_property_readonly("centered", &TailSpec::centered)
        .def("__repr__", [](const TailSpec& s) { return "TailSpec(" + to_json(s).dump() + ")"; });

    m.def("tail_prob", &tail_prob, py::arg("spec"), py::arg("x"));
    m.def("normalizer_a", &normalizer_a, py::arg("spec"), py::arg("n"));
    m.def(
        "truncated_moment",
        [](const TailSpec& s, double n, double e, const std::string& side) {
            return truncated_moment(s, n, e, parse_side(side));
        },
        py::arg("spec"), py::arg("n"), py::arg("exponent"), py::arg("side"));
    m.def(
        "sample_innovations",
        [](const TailSpec& s, std::size_t count, std::uint64_t seed) {
            RandomStream rng(seed);
            std::vector<double> out(count);
            for (double& x : out) x = sample_innovation(s, rng);
            return out;
        },
        py::arg("spec"), py::arg("count"), py::arg("seed"));

    py::class_<StepPath>(m, "StepPath")
        .def(py::init<std::size_t, std::vector<double>>(), py::arg("n"), py::arg("values"))
        .def_readonly("n", &StepPath::n)
        .def_readonly("values", &StepPath::values)
        .def("__call__", &StepPath::operator(), py::arg("t"))
        .def("scaled", &StepPath::scaled, py::arg("c"))
        .def("shifted", &StepPath::shifted, py::arg("c"));
    m.def("read_csv", py::overload_cast<const std::string&>(&read_csv), py::arg("file"));
    m.def("write_csv", py::overload_cast<const std::string&, const StepPath&>(&write_csv), py::arg("file"),
          py::arg("path"));
    m.def("d_m2", &d_m2, py::arg("first"), py::arg("second"), py::arg("tol") = 1e-6);
    m.def("d_uniform", &d_uniform, py::arg("first"), py::arg("second"));

    m.def(
        "check_sandwich",
        [](const std::vector<double>& v) -> py::object {
            const SandwichVerdict s = check_sandwich(v);
            if (s == SandwichVerdict::indeterminate) return py::none();
            return py::bool_(s == SandwichVerdict::holds);
        },
        py::arg("values"));

    m.def("drift_b", &drift_b, py::arg("alpha"), py::arg("p"), py::arg("r"));
    m.def(
        "levy_exponent",
        [](double alpha, double p, double theta) { return levy_exponent(CharTriple::make(alpha, p, 1.0 - p), theta); },
        py::arg("alpha"), py::arg("p"), py::arg("theta"));
    m.def(
        "sample_stable",
        [](double alpha, double p, std::size_t count, std::uint64_t seed) {
            const CharTriple t = CharTriple::make(alpha, p, 1.0 - p);
            RandomStream rng(seed);
            std::vector<double> out(count);
            for (double& x : out) x = sample_stable(t, rng);
            return out;
        },
        py::arg("alpha"), py::arg("p"), py::arg("count"), py::arg("seed"));

    m.def("ks_two_sample", &ks_two_sample, py::arg("a"), py::arg("b"));

    m.def(
        "simulate_path",
        [](const std::string& config, std::size_t n, std::uint64_t rep) {
            return simulate_partial_sum_path(parse_config(config), n, rep);
        },
        py::arg("config"), py::arg("n"), py::arg("replication") = 0);
    m.def(
        "run_fclt",
        [](const std::string& config, unsigned workers) {
            const ExperimentConfig cfg = parse_config(config);
            py::gil_scoped_release release;
            return report_text(run_fclt_experiment(cfg, workers));
        },
        py::arg("config"), py::arg("workers") = 1);
    m.def(
        "run_metric_gap",
        [](const std::string& config, unsigned workers) {
            const ExperimentConfig cfg = parse_config(config);
            py::gil_scoped_release release;
            return report_text(run_metric_gap_experiment(cfg, workers));
        },
        py::arg("config"), py::arg("workers") = 1);
    m.def(
        "run_appendix",
        [](const TailSpec& s, const std::vector<double>& grid) { return report_text(run_appendix_check(s, grid)); },
        py::arg("spec"), py::arg("n_grid"));
    m.def(
        "run_check_coeffs", [](const std::string& config) { return report_text(run_coefficient_check(parse_config(config))); },
        py::arg("config"));
}
