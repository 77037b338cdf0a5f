#include "mafclt/ma_paths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mafclt/errors.hpp"
#include "mafclt/summation.hpp"

namespace mafclt {

InnovationWindow::InnovationWindow(std::ptrdiff_t first, std::vector<double> values)
    : first_(first), values_(std::move(values)) {}

InnovationWindow InnovationWindow::sample(const TailSpec& spec, std::ptrdiff_t first, std::ptrdiff_t last,
                                          RandomStream& rng) {
    if (last < first) throw DomainError("innovation window: last index precedes first");
    std::vector<double> z(static_cast<std::size_t>(last - first + 1));
    for (double& v : z) v = sample_innovation(spec, rng);
    return {first, std::move(z)};
}

double InnovationWindow::at(std::ptrdiff_t i) const {
    if (!covers(i, i)) throw DomainError("innovation index " + std::to_string(i) + " outside the window");
    return (*this)[i];
}

double InnovationWindow::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

StepPath::StepPath(std::size_t n_, std::vector<double> values_) : n(n_), values(std::move(values_)) {
    if (n == 0) throw DomainError("step path needs n >= 1");
    if (values.size() != n + 1) throw DomainError("step path needs n + 1 values");
}

double StepPath::operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("step path evaluated outside [0,1]");
    const auto k = static_cast<std::size_t>(std::floor(t * static_cast<double>(n)));
    return values[std::min(k, n)];
}

StepPath StepPath::scaled(double c) const {
    StepPath out = *this;
    for (double& v : out.values) v *= c;
    return out;
}

StepPath StepPath::shifted(double c) const {
    StepPath out = *this;
    for (double& v : out.values) v += c;
    return out;
}

void write_csv(std::ostream& out, const StepPath& path) {
    out << "k,k/n,value\n";
    const double n = static_cast<double>(path.n);
    std::ostringstream row;
    row << std::setprecision(17);
    for (std::size_t k = 0; k <= path.n; ++k) {
        row.str("");
        row << k << ',' << static_cast<double>(k) / n << ',' << path.values[k] << '\n';
        out << row.str();
    }
}

void write_csv(const std::string& file, const StepPath& path) {
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot write " + file);
    write_csv(out, path);
}

StepPath read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("path CSV is empty");
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string k_field;
        std::string t_field;
        std::string v_field;
        if (!std::getline(fields, k_field, ',') || !std::getline(fields, t_field, ',') ||
            !std::getline(fields, v_field))
            throw ConfigError("path CSV line " + std::to_string(line_no) + ": expected k,k/n,value");
        try {
            const unsigned long long k = std::stoull(k_field);
            if (k != values.size())
                throw ConfigError("path CSV line " + std::to_string(line_no) + ": rows must list k = 0, 1, 2, ...");
            values.push_back(std::stod(v_field));
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const ConfigError*>(&e)) throw;
            throw ConfigError("path CSV line " + std::to_string(line_no) + ": not a number");
        }
    }
    if (values.size() < 2) throw ConfigError("path CSV needs at least the rows k = 0 and k = 1");
    const std::size_t n = values.size() - 1;
    return {n, std::move(values)};
}

StepPath read_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read " + file);
    return read_csv(in);
}

std::vector<double> build_ma_series(const CoeffDraw& draw, const InnovationWindow& window, std::size_t n) {
    const auto k = static_cast<std::ptrdiff_t>(draw.horizon());
    const auto nn = static_cast<std::ptrdiff_t>(n);
    if (draw.values.empty()) throw DomainError("build_ma_series: empty coefficient draw");
    if (!window.covers(1 - k, nn)) throw DomainError("build_ma_series: innovation window does not cover 1-K..n");
    std::vector<double> x(n);
    for (std::ptrdiff_t i = 1; i <= nn; ++i) {
        CompensatedSum acc;
        for (std::ptrdiff_t j = 0; j <= k; ++j) {
            const double c = draw.values[static_cast<std::size_t>(j)];
            if (c != 0.0) acc.add(c * window[i - j]);
        }
        x[static_cast<std::size_t>(i - 1)] = acc.value();
    }
    return x;
}

double truncation_error_bound(const CoeffDraw& draw, const InnovationWindow& window) {
    return draw.tail_bound * window.max_abs();
}

std::vector<double> truncated_ma_series(const CoeffDraw& draw, std::size_t q, const InnovationWindow& window,
                                        std::size_t n) {
    const TailSums tails = tail_sum(draw, q);
    const auto qq = static_cast<std::ptrdiff_t>(q);
    const auto nn = static_cast<std::ptrdiff_t>(n);
    if (!window.covers(1 - qq, nn)) throw DomainError("truncated_ma_series: innovation window does not cover 1-q..n");
    std::vector<double> x(n);
    for (std::ptrdiff_t i = 1; i <= nn; ++i) {
        CompensatedSum acc;
        for (std::ptrdiff_t j = 0; j < qq; ++j) {
            const double c = draw.values[static_cast<std::size_t>(j)];
            if (c != 0.0) acc.add(c * window[i - j]);
        }
        acc.add(tails.c_prime * window[i - qq]);
        x[static_cast<std::size_t>(i - 1)] = acc.value();
    }
    return x;
}

StepPath partial_sum_path(std::span<const double> series, double a_n) {
    if (!(a_n > 0.0)) throw DomainError("partial_sum_path: a_n must be positive");
    if (series.empty()) throw DomainError("partial_sum_path: empty series");
    std::vector<double> v(series.size() + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t k = 0; k < series.size(); ++k) {
        acc.add(series[k]);
        v[k + 1] = acc.value() / a_n;
    }
    return {series.size(), std::move(v)};
}

std::vector<double> innovation_series(const InnovationWindow& window, std::size_t n) {
    if (!window.covers(1, static_cast<std::ptrdiff_t>(n))) throw DomainError("innovation window does not cover 1..n");
    std::vector<double> z(n);
    for (std::size_t i = 1; i <= n; ++i) z[i - 1] = window[static_cast<std::ptrdiff_t>(i)];
    return z;
}

Decomposition partial_sum_decomposition(DecompositionCase which, std::size_t k, std::size_t n,
                                        std::span<const double> coeffs, const InnovationWindow& window, double a_n) {
    if (coeffs.empty()) throw DomainError("decomposition: empty coefficient list");
    if (!(a_n > 0.0)) throw DomainError("decomposition: a_n must be positive");
    const std::size_t q = coeffs.size() - 1;
    switch (which) {
        case DecompositionCase::short_prefix:
            if (!(k < q)) throw DomainError("decomposition: the short-prefix case needs k < q");
            break;
        case DecompositionCase::long_prefix:
            if (!(k >= q)) throw DomainError("decomposition: the long-prefix case needs k >= q");
            break;
        case DecompositionCase::lagged:
            if (!(q <= k && k + q <= n)) throw DomainError("decomposition: the lagged case needs q <= k <= n - q");
            break;
    }
    if (k > n) throw DomainError("decomposition: k exceeds n");
    const auto qq = static_cast<std::ptrdiff_t>(q);
    const auto kk = static_cast<std::ptrdiff_t>(k);
    const std::ptrdiff_t upper = which == DecompositionCase::lagged ? kk + qq : kk;
    if (!window.covers(std::min<std::ptrdiff_t>(1 - qq, 1), std::max<std::ptrdiff_t>(upper, 1)))
        throw DomainError("decomposition: innovation window does not cover the needed indices");

    // prefix[m] = C_0 + ... + C_{m-1}; range(a, b) = C_a + ... + C_b.
    std::vector<double> prefix(q + 2, 0.0);
    {
        CompensatedSum acc;
        for (std::size_t s = 0; s <= q; ++s) {
            acc.add(coeffs[s]);
            prefix[s + 1] = acc.value();
        }
    }
    auto range = [&](std::ptrdiff_t a, std::ptrdiff_t b) {
        if (a > b) return 0.0;
        return prefix[static_cast<std::size_t>(b + 1)] - prefix[static_cast<std::size_t>(a)];
    };
    const double total = compensated_sum(coeffs);
    auto z = [&](std::ptrdiff_t i) { return window[i] / a_n; };

    // Left side straight from the definitions of C and X_i.
    CompensatedSum lhs;
    for (std::ptrdiff_t i = 1; i <= kk; ++i) lhs.add(total * z(i));
    for (std::ptrdiff_t i = 1; i <= upper; ++i)
        for (std::ptrdiff_t j = 0; j <= qq; ++j) lhs.add(-coeffs[static_cast<std::size_t>(j)] * z(i - j));

    Decomposition out;
    out.lhs = lhs.value();
    CompensatedSum rhs;
    switch (which) {
        case DecompositionCase::short_prefix: {
            for (std::ptrdiff_t u = 0; u <= kk - 1; ++u) rhs.add(z(kk - u) * range(u + 1, qq));
            // Innovations at or before time 0 whose whole lag range fits in the prefix.
            for (std::ptrdiff_t u = qq - kk; u <= qq - 1; ++u) rhs.add(-z(-u) * range(u + 1, qq));
            for (std::ptrdiff_t u = 0; u <= qq - kk - 1; ++u) rhs.add(-z(-u) * range(u + 1, u + kk));
            break;
        }
        case DecompositionCase::long_prefix: {
            CompensatedSum recent;
            CompensatedSum presample;
            for (std::ptrdiff_t u = 0; u <= qq - 1; ++u) {
                recent.add(z(kk - u) * range(u + 1, qq));
                presample.add(z(-u) * range(u + 1, qq));
            }
            out.recent = recent.value();
            out.presample = presample.value();
            rhs.add(*out.recent);
            rhs.add(-*out.presample);
            break;
        }
        case DecompositionCase::lagged: {
            CompensatedSum presample;
            CompensatedSum lookahead;
            for (std::ptrdiff_t u = 0; u <= qq - 1; ++u) presample.add(z(-u) * range(u + 1, qq));
            for (std::ptrdiff_t u = 1; u <= qq; ++u) lookahead.add(z(kk + u) * range(0, qq - u));
            out.presample = presample.value();
            out.lookahead = lookahead.value();
            rhs.add(-*out.presample);
            rhs.add(-*out.lookahead);
            break;
        }
    }
    out.rhs = rhs.value();
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

}  // namespace mafclt
