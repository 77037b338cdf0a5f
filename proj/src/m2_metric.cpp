#include "mafclt/m2_metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mafclt/errors.hpp"

namespace mafclt {

CompletedGraph::CompletedGraph(const StepPath& path) : n_(path.n) {
    if (path.n == 0 || path.values.size() != path.n + 1) throw DomainError("completed_graph: malformed step path");
    const double n = static_cast<double>(n_);

    // Runs of equal values; run j starts at grid index starts[j].
    std::vector<std::size_t> starts;
    run_of_.resize(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) {
        if (k == 0 || path.values[k] != path.values[k - 1]) {
            starts.push_back(k);
            run_values_.push_back(path.values[k]);
        }
        run_of_[k] = starts.size() - 1;
    }
    const std::size_t runs = starts.size();
    for (std::size_t j = 0; j < runs; ++j) {
        const double t0 = static_cast<double>(starts[j]) / n;
        const double t1 = j + 1 < runs ? static_cast<double>(starts[j + 1]) / n : 1.0;
        if (j > 0) {
            const double a = run_values_[j - 1];
            const double b = run_values_[j];
            segments_.push_back({t0, t0, std::min(a, b), std::max(a, b)});
        }
        segments_.push_back({t0, t1, run_values_[j], run_values_[j]});
    }

    log2_.assign(runs + 1, 0);
    for (std::size_t i = 2; i <= runs; ++i) log2_[i] = log2_[i / 2] + 1;
    const unsigned levels = log2_[runs] + 1;
    min_table_.assign(levels, {});
    max_table_.assign(levels, {});
    min_table_[0] = run_values_;
    max_table_[0] = run_values_;
    for (unsigned l = 1; l < levels; ++l) {
        const std::size_t width = std::size_t{1} << l;
        const std::size_t count = runs - width + 1;
        min_table_[l].resize(count);
        max_table_[l].resize(count);
        const std::size_t half = width / 2;
        for (std::size_t i = 0; i < count; ++i) {
            min_table_[l][i] = std::min(min_table_[l - 1][i], min_table_[l - 1][i + half]);
            max_table_[l][i] = std::max(max_table_[l - 1][i], max_table_[l - 1][i + half]);
        }
    }
}

std::size_t CompletedGraph::first_run_meeting(double a) const {
    // The cell [k/n, (k+1)/n] with k = ceil(a n) - 1 is the first whose closed span reaches a.
    const double k = std::ceil(a * static_cast<double>(n_)) - 1.0;
    if (k <= 0.0) return run_of_[0];
    if (k >= static_cast<double>(n_)) return run_of_[n_];
    return run_of_[static_cast<std::size_t>(k)];
}

std::size_t CompletedGraph::last_run_meeting(double b) const {
    const double k = std::floor(b * static_cast<double>(n_));
    if (k <= 0.0) return run_of_[0];
    if (k >= static_cast<double>(n_)) return run_of_[n_];
    return run_of_[static_cast<std::size_t>(k)];
}

void CompletedGraph::window_range(double a, double b, double& lo, double& hi) const {
    const std::size_t first = first_run_meeting(a);
    const std::size_t last = last_run_meeting(b);
    const unsigned l = log2_[last - first + 1];
    const std::size_t other = last + 1 - (std::size_t{1} << l);
    lo = std::min(min_table_[l][first], min_table_[l][other]);
    hi = std::max(max_table_[l][first], max_table_[l][other]);
}

void CompletedGraph::vertical_distance(double t, double y0, double y1, double precision, double& lo,
                                       double& hi) const {
    // {y : distance((t, y), graph) <= r} is the interval [m(r) - r, M(r) + r], where
    // [m(r), M(r)] is the range of the graph over the time window [t - r, t + r].
    auto covered = [&](double r) {
        double m;
        double big_m;
        window_range(t - r, t + r, m, big_m);
        return y0 >= m - r && y1 <= big_m + r;
    };
    double m0;
    double big_m0;
    window_range(t, t, m0, big_m0);
    lo = 0.0;
    hi = std::max({0.0, y1 - big_m0, m0 - y0});
    if (hi == 0.0) return;
    while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (covered(mid) ? hi : lo) = mid;
    }
}

void CompletedGraph::point_distance(double t, double y, double precision, double& lo, double& hi) const {
    vertical_distance(t, y, y, precision, lo, hi);
}

double CompletedGraph::spread_bound(double a, double b, double y) const {
    double lo;
    double hi;
    window_range(a, b, lo, hi);
    return std::max(hi - y, y - lo);
}

double CompletedGraph::shared_window_bound(double a, double b, double y, double start, double precision) const {
    auto covered = [&](double r) {
        double m;
        double big_m;
        window_range(b - r, a + r, m, big_m);
        return y >= m - r && y <= big_m + r;
    };
    double lo = 0.5 * (b - a);
    if (covered(lo)) return lo;
    double hi = start;
    while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (covered(mid) ? hi : lo) = mid;
    }
    return hi;
}

CompletedGraph completed_graph(const StepPath& path) { return CompletedGraph(path); }

double directed_hausdorff(const CompletedGraph& g1, const CompletedGraph& g2, double tol) {
    if (!(tol > 0.0)) throw DomainError("directed_hausdorff: tol must be positive");
    // Distances are bracketed to a quarter of the budget, the rest goes to the
    // upper bounds over unexplored parts of horizontal segments.
    const double precision = 0.25 * tol;
    double best = 0.0;

    struct Piece {
        double a;
        double b;
        double value;
        double upper;
    };
    // The cheap bounds first; the shared-window bisection only when they cannot prune.
    auto bound = [&](double a, double b, double y, double lipschitz) {
        const double cheap = std::min(lipschitz, g2.spread_bound(a, b, y));
        if (cheap <= best + tol) return cheap;
        return std::min(cheap, g2.shared_window_bound(a, b, y, lipschitz, precision));
    };

    std::vector<Piece> pieces;
    for (const Segment& s : g1.segments()) {
        double lo;
        double hi;
        if (s.vertical()) {
            g2.vertical_distance(s.t0, s.y0, s.y1, precision, lo, hi);
            best = std::max(best, lo);
            continue;
        }
        const double mid = 0.5 * (s.t0 + s.t1);
        g2.point_distance(mid, s.y0, precision, lo, hi);
        best = std::max(best, lo);
        const double half = 0.5 * (s.t1 - s.t0);
        if (half > 0.0) pieces.push_back({s.t0, s.t1, s.y0, bound(s.t0, s.t1, s.y0, hi + half)});
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.upper > y.upper; });

    std::vector<Piece> stack;
    for (const Piece& start : pieces) {
        if (start.upper <= best + tol) break;
        stack.push_back(start);
        while (!stack.empty()) {
            const Piece p = stack.back();
            stack.pop_back();
            if (p.upper <= best + tol) continue;
            const double mid = 0.5 * (p.a + p.b);
            const double quarter = 0.25 * (p.b - p.a);
            for (const auto& [a, b] : {std::pair{p.a, mid}, std::pair{mid, p.b}}) {
                double lo;
                double hi;
                g2.point_distance(0.5 * (a + b), p.value, precision, lo, hi);
                best = std::max(best, lo);
                stack.push_back({a, b, p.value, bound(a, b, p.value, hi + quarter)});
            }
        }
    }
    return best;
}

double d_m2(const StepPath& p1, const StepPath& p2, double tol) {
    const CompletedGraph g1(p1);
    const CompletedGraph g2(p2);
    return std::max(directed_hausdorff(g1, g2, tol), directed_hausdorff(g2, g1, tol));
}

double d_uniform(const StepPath& p1, const StepPath& p2) {
    constexpr std::size_t kMaxGrid = 1'000'000;
    const std::size_t g = std::gcd(p1.n, p2.n);
    const std::size_t m1 = p1.n / g;
    if (p2.n > kMaxGrid || m1 > kMaxGrid / p2.n)
        throw ResolutionError("d_uniform: common refinement grid exceeds 10^6 cells");
    const std::size_t grid = m1 * p2.n;
    const std::size_t step1 = grid / p1.n;
    const std::size_t step2 = grid / p2.n;
    double best = 0.0;
    for (std::size_t k = 0; k <= grid; ++k)
        best = std::max(best, std::abs(p1.values[k / step1] - p2.values[k / step2]));
    return best;
}

}  // namespace mafclt
