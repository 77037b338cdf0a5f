// mafclt: command-line driver for the moving-average FCLT experiments.
// Exit status: 0 when the configured thresholds pass, 2 when they fail, 1 on error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mafclt/config.hpp"
#include "mafclt/errors.hpp"
#include "mafclt/harness.hpp"
#include "mafclt/m2_metric.hpp"
#include "mafclt/ma_paths.hpp"
#include "mafclt/tails.hpp"

using namespace mafclt;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, Common& c, bool with_config = true) {
    if (with_config) cmd->add_option("--config", c.config, "JSON experiment configuration")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Master seed (overrides the configuration)");
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Common& c) {
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (!c.out.empty()) cfg.output_dir = c.out;
    return cfg;
}

int finish(const Report& report, const std::string& dir) {
    write_report(report, dir);
    std::cout << report.experiment << ": " << (report.pass ? "PASS" : "FAIL") << " (" << dir << "/report.json)\n";
    return report.pass ? 0 : 2;
}

TailSpec tail_from_flags(const Common& c, std::optional<double> alpha, std::optional<double> p) {
    TailSpec tail = c.config.empty() ? ExperimentConfig{}.tail : load_config(c.config).tail;
    if (alpha || p) tail = TailSpec::regular(alpha.value_or(tail.alpha()), p.value_or(tail.p()));
    return tail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moving-average functional limit theorem experiments"};
    app.require_subcommand(1);

    Common fclt_opts, gap_opts, appendix_opts, metric_opts, coeff_opts, karamata_opts, path_opts;

    auto* fclt = app.add_subcommand("fclt", "KS comparison of V_n(1) with the stable limit");
    add_common(fclt, fclt_opts);

    auto* gap = app.add_subcommand("metric-gap", "M2 distance between C V_n^Z and V_n over an n grid");
    add_common(gap, gap_opts);

    std::optional<double> app_alpha, app_p;
    std::vector<double> app_grid{1e10, 1e20, 1e30};
    auto* appendix = app.add_subcommand("appendix", "Closed-form rate n q_n^2 P(|Z| > a_n/q_n)^2");
    add_common(appendix, appendix_opts);
    appendix->add_option("--alpha", app_alpha, "Tail index (>= 1)");
    appendix->add_option("--p", app_p, "Positive tail balance");
    appendix->add_option("--n", app_grid, "Grid of n values");

    std::string path_a, path_b;
    double metric_tol = 1e-6;
    auto* metric = app.add_subcommand("metric", "M2 and uniform distances between two step-path CSV files");
    add_common(metric, metric_opts, false);
    metric->add_option("first", path_a, "First path CSV")->required();
    metric->add_option("second", path_b, "Second path CSV")->required();
    metric->add_option("--tol", metric_tol, "Certified tolerance")->check(CLI::PositiveNumber);

    auto* coeffs = app.add_subcommand("check-coeffs", "Sandwich condition and moment diagnostics");
    add_common(coeffs, coeff_opts);

    std::optional<double> kar_alpha, kar_p;
    double kar_exponent = 0.9;
    std::string kar_side = "le";
    std::vector<double> kar_grid{1e2, 1e4, 1e6, 1e8};
    auto* karamata = app.add_subcommand("karamata", "Truncated moments against their Karamata limits");
    add_common(karamata, karamata_opts);
    karamata->add_option("--alpha", kar_alpha, "Tail index");
    karamata->add_option("--p", kar_p, "Positive tail balance");
    karamata->add_option("--exponent", kar_exponent, "Moment exponent");
    karamata->add_option("--side", kar_side, "le or gt")->check(CLI::IsMember({"le", "gt"}));
    karamata->add_option("--n", kar_grid, "Grid of n values");

    std::size_t path_n = 1000;
    std::uint64_t path_rep = 0;
    auto* simulate = app.add_subcommand("simulate-path", "Write one partial-sum path V_n as CSV");
    add_common(simulate, path_opts);
    simulate->add_option("--n", path_n, "Number of steps")->check(CLI::PositiveNumber);
    simulate->add_option("--rep", path_rep, "Replication index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*fclt) {
            const ExperimentConfig cfg = resolve(fclt_opts);
            return finish(run_fclt_experiment(cfg, fclt_opts.workers), cfg.output_dir);
        }
        if (*gap) {
            const ExperimentConfig cfg = resolve(gap_opts);
            return finish(run_metric_gap_experiment(cfg, gap_opts.workers), cfg.output_dir);
        }
        if (*appendix) {
            const std::string dir = appendix_opts.out.empty() ? "out" : appendix_opts.out;
            return finish(run_appendix_check(tail_from_flags(appendix_opts, app_alpha, app_p), app_grid), dir);
        }
        if (*karamata) {
            const std::string dir = karamata_opts.out.empty() ? "out" : karamata_opts.out;
            const TruncationSide side = kar_side == "le" ? TruncationSide::le : TruncationSide::gt;
            return finish(run_karamata_table(tail_from_flags(karamata_opts, kar_alpha, kar_p), kar_exponent, side,
                                             kar_grid),
                          dir);
        }
        if (*coeffs) {
            const ExperimentConfig cfg = resolve(coeff_opts);
            return finish(run_coefficient_check(cfg), cfg.output_dir);
        }
        if (*metric) {
            const StepPath a = read_csv(path_a);
            const StepPath b = read_csv(path_b);
            Report report;
            report.experiment = "metric";
            const double m2 = d_m2(a, b, metric_tol);
            const double uniform = d_uniform(a, b);
            report.pass = m2 <= uniform + metric_tol;
            report.summary = {{"first", path_a}, {"second", path_b}, {"d_m2", m2},
                              {"d_uniform", uniform}, {"tol", metric_tol}};
            report.tables.push_back({"metric", {"n_first", "n_second", "d_m2", "d_uniform"},
                                     {{double(a.n), double(b.n), m2, uniform}}});
            std::cout << "d_M2 = " << m2 << ", d_uniform = " << uniform << '\n';
            return finish(report, metric_opts.out.empty() ? "out" : metric_opts.out);
        }
        if (*simulate) {
            const ExperimentConfig cfg = resolve(path_opts);
            const StepPath path = simulate_partial_sum_path(cfg, path_n, path_rep);
            std::filesystem::create_directories(cfg.output_dir);
            const std::string file = (std::filesystem::path(cfg.output_dir) / "path.csv").string();
            write_csv(file, path);
            Report report;
            report.experiment = "simulate-path";
            report.pass = true;
            report.seed = cfg.seed;
            report.summary = {{"config", to_json(cfg)}, {"n", path_n}, {"replication", path_rep}, {"path", "path.csv"},
                              {"final_value", path.values.back()}};
            return finish(report, cfg.output_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
