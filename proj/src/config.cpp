#include "mafclt/config.hpp"

#include <fstream>
#include <set>

#include "mafclt/errors.hpp"
#include "mafclt/numerics.hpp"

namespace mafclt {

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : j.items())
        if (!keys.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <class T>
T require(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + " needs '" + key + "'");
    return get_or<T>(j, key, T{});
}

}  // namespace

std::size_t QSchedule::at(std::size_t n) const {
    if (kind == Kind::fixed) return q;
    return std::max<std::size_t>(1, tenth_root_floor(static_cast<double>(n)));
}

void ExperimentConfig::validate() const {
    if (reps < 2) throw ConfigError("reps must be at least 2");
    if (reference_reps < 0) throw ConfigError("reference_reps must be nonnegative");
    if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
    if (n_grid.front() < 1) throw ConfigError("n_grid entries must be positive");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");
    if (!(metric_tol > 0.0)) throw ConfigError("metric_tol must be positive");
    if (q_schedule.kind == QSchedule::Kind::fixed && q_schedule.q < 1) throw ConfigError("fixed q must be >= 1");
    if (mc_reps <= 0) throw ConfigError("mc_reps must be positive");
    mafclt::validate(coeffs);
}

TailSpec tail_from_json(const json& j) {
    reject_unknown(j, {"alpha", "p", "r", "sv", "x_min", "centered", "symmetric"}, "tail");
    const double alpha = require<double>(j, "alpha", "tail");
    double p = get_or<double>(j, "p", 0.5);
    if (j.contains("r")) {
        const double r = j.at("r").get<double>();
        if (!j.contains("p")) p = 1.0 - r;
        if (std::abs(p + r - 1.0) > 1e-12) throw ConfigError("tail balances must satisfy p + r = 1");
    }
    SlowlyVarying sv;
    if (j.contains("sv")) {
        const json& s = j.at("sv");
        reject_unknown(s, {"kind", "c", "beta"}, "tail.sv");
        const auto kind = get_or<std::string>(s, "kind", "constant");
        const double c = get_or<double>(s, "c", 1.0);
        if (kind == "constant") {
            sv = SlowlyVarying::constant(c);
        } else if (kind == "log") {
            sv = SlowlyVarying::log(get_or<double>(s, "beta", 0.0), c);
        } else {
            throw ConfigError("tail.sv.kind must be 'constant' or 'log'");
        }
    }
    const double x_min = get_or<double>(j, "x_min", 1.0);
    const bool centered = get_or<bool>(j, "centered", alpha > 1.0);
    const bool symmetric = get_or<bool>(j, "symmetric", alpha == 1.0);
    return TailSpec(alpha, p, sv, x_min, centered, symmetric);
}

json to_json(const TailSpec& spec) {
    json sv = {{"kind", spec.sv().kind == SlowVariation::constant ? "constant" : "log"}, {"c", spec.sv().c}};
    if (spec.sv().kind == SlowVariation::log) sv["beta"] = spec.sv().beta;
    return {{"alpha", spec.alpha()}, {"p", spec.p()},           {"r", spec.r()},
            {"sv", sv},              {"x_min", spec.x_min()},   {"centered", spec.centered()},
            {"symmetric", spec.symmetric()}};
}

CoeffModel coeffs_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("coeffs must be a JSON object");
    const auto kind = require<std::string>(j, "kind", "coeffs");
    CoeffModel model;
    if (kind == "finite") {
        reject_unknown(j, {"kind", "values"}, "coeffs");
        model = FiniteCoefficients{require<std::vector<double>>(j, "values", "coeffs")};
    } else if (kind == "geometric") {
        reject_unknown(j, {"kind", "scale", "ratio"}, "coeffs");
        model = GeometricCoefficients{get_or<double>(j, "scale", 1.0), require<double>(j, "ratio", "coeffs")};
    } else if (kind == "power") {
        reject_unknown(j, {"kind", "scale", "exponent"}, "coeffs");
        model = PowerCoefficients{get_or<double>(j, "scale", 1.0), require<double>(j, "exponent", "coeffs")};
    } else if (kind == "iid_scaled") {
        reject_unknown(j, {"kind", "base", "scale", "rho"}, "coeffs");
        const auto base = get_or<std::string>(j, "base", "uniform");
        if (base != "uniform" && base != "bernoulli") throw ConfigError("coeffs.base must be 'uniform' or 'bernoulli'");
        model = IidScaledCoefficients{base == "uniform" ? BaseLaw::uniform : BaseLaw::bernoulli,
                                      get_or<double>(j, "scale", 1.0), require<double>(j, "rho", "coeffs")};
    } else if (kind == "spike") {
        reject_unknown(j, {"kind", "delta", "epsilon", "gamma"}, "coeffs");
        model = SpikeCoefficients{require<double>(j, "delta", "coeffs"), require<double>(j, "epsilon", "coeffs"),
                                  require<double>(j, "gamma", "coeffs")};
    } else {
        throw ConfigError("unknown coefficient kind '" + kind + "'");
    }
    validate(model);
    return model;
}

json to_json(const CoeffModel& model) {
    if (const auto* m = std::get_if<FiniteCoefficients>(&model)) return {{"kind", "finite"}, {"values", m->values}};
    if (const auto* m = std::get_if<GeometricCoefficients>(&model))
        return {{"kind", "geometric"}, {"scale", m->scale}, {"ratio", m->ratio}};
    if (const auto* m = std::get_if<PowerCoefficients>(&model))
        return {{"kind", "power"}, {"scale", m->scale}, {"exponent", m->exponent}};
    if (const auto* m = std::get_if<IidScaledCoefficients>(&model))
        return {{"kind", "iid_scaled"},
                {"base", m->base == BaseLaw::uniform ? "uniform" : "bernoulli"},
                {"scale", m->scale},
                {"rho", m->rho}};
    const auto& m = std::get<SpikeCoefficients>(model);
    return {{"kind", "spike"}, {"delta", m.delta}, {"epsilon", m.epsilon}, {"gamma", m.gamma}};
}

ExperimentConfig config_from_json(const json& j) {
    reject_unknown(j,
                   {"tail", "coeffs", "n_grid", "reps", "reference_reps", "seed", "q_schedule", "metric_tol",
                    "output_dir", "horizon", "thresholds", "exponents", "mc_reps"},
                   "config");
    ExperimentConfig cfg;
    if (j.contains("tail")) cfg.tail = tail_from_json(j.at("tail"));
    if (j.contains("coeffs")) cfg.coeffs = coeffs_from_json(j.at("coeffs"));
    cfg.n_grid = get_or<std::vector<std::size_t>>(j, "n_grid", cfg.n_grid);
    cfg.reps = get_or<int>(j, "reps", cfg.reps);
    cfg.reference_reps = get_or<int>(j, "reference_reps", cfg.reference_reps);
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    if (j.contains("q_schedule")) {
        const json& q = j.at("q_schedule");
        reject_unknown(q, {"kind", "q"}, "q_schedule");
        const auto kind = get_or<std::string>(q, "kind", "tenth_root");
        if (kind == "tenth_root") {
            cfg.q_schedule = {QSchedule::Kind::tenth_root, 1};
        } else if (kind == "fixed") {
            cfg.q_schedule = {QSchedule::Kind::fixed, require<std::size_t>(q, "q", "q_schedule")};
        } else {
            throw ConfigError("q_schedule.kind must be 'tenth_root' or 'fixed'");
        }
    }
    cfg.metric_tol = get_or<double>(j, "metric_tol", cfg.metric_tol);
    cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);
    if (j.contains("horizon") && !j.at("horizon").is_null()) cfg.horizon = j.at("horizon").get<std::size_t>();
    if (j.contains("thresholds")) {
        const json& t = j.at("thresholds");
        reject_unknown(t, {"ks", "gap_median", "tail_condition"}, "thresholds");
        cfg.thresholds.ks = get_or<double>(t, "ks", cfg.thresholds.ks);
        cfg.thresholds.gap_median = get_or<double>(t, "gap_median", cfg.thresholds.gap_median);
        cfg.thresholds.tail_condition = get_or<double>(t, "tail_condition", cfg.thresholds.tail_condition);
    }
    if (j.contains("exponents")) {
        const json& e = j.at("exponents");
        reject_unknown(e, {"delta", "gamma", "eta"}, "exponents");
        cfg.exponents.delta = get_or<double>(e, "delta", cfg.exponents.delta);
        cfg.exponents.gamma = get_or<double>(e, "gamma", cfg.exponents.gamma);
        cfg.exponents.eta = get_or<double>(e, "eta", cfg.exponents.eta);
    }
    cfg.mc_reps = get_or<int>(j, "mc_reps", cfg.mc_reps);
    cfg.validate();
    return cfg;
}

json to_json(const ExperimentConfig& cfg) {
    json q = {{"kind", cfg.q_schedule.kind == QSchedule::Kind::fixed ? "fixed" : "tenth_root"}};
    if (cfg.q_schedule.kind == QSchedule::Kind::fixed) q["q"] = cfg.q_schedule.q;
    return {{"tail", to_json(cfg.tail)},
            {"coeffs", to_json(cfg.coeffs)},
            {"n_grid", cfg.n_grid},
            {"reps", cfg.reps},
            {"reference_reps", cfg.reference_size()},
            {"seed", cfg.seed},
            {"q_schedule", q},
            {"metric_tol", cfg.metric_tol},
            {"output_dir", cfg.output_dir},
            {"horizon", cfg.horizon ? json(*cfg.horizon) : json(nullptr)},
            {"thresholds",
             {{"ks", cfg.thresholds.ks},
              {"gap_median", cfg.thresholds.gap_median},
              {"tail_condition", cfg.thresholds.tail_condition}}},
            {"exponents",
             {{"delta", cfg.exponents.delta}, {"gamma", cfg.exponents.gamma}, {"eta", cfg.exponents.eta}}},
            {"mc_reps", cfg.mc_reps}};
}

ExperimentConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + file + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

}  // namespace mafclt
