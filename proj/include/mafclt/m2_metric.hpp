#pragma once

#include <cstddef>
#include <vector>

#include "mafclt/ma_paths.hpp"

namespace mafclt {

/// Axis-aligned segment of a completed graph: horizontal when y0 == y1 (t0 <= t1),
/// vertical when t0 == t1 (y0 <= y1).
struct Segment {
    double t0;
    double t1;
    double y0;
    double y1;

    [[nodiscard]] bool vertical() const { return t0 == t1 && y0 != y1; }
};

/// Completed graph of a step path: the graph with vertical segments joining
/// the values on both sides of every jump. Consecutive equal values are
/// merged first, so J strict jumps give 2J + 1 segments, alternating
/// horizontal and vertical. A jump at t = 1 ends in a zero-length horizontal.
class CompletedGraph {
public:
    explicit CompletedGraph(const StepPath& path);

    [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }
    [[nodiscard]] std::size_t jumps() const { return run_values_.size() - 1; }

    /// l-infinity distance from (t, y), t in [0,1], to the graph, as a
    /// bracket [lo, hi] with hi - lo <= precision.
    void point_distance(double t, double y, double precision, double& lo, double& hi) const;

    /// Sup of the distance over the vertical piece {t} x [y0, y1], as a bracket.
    void vertical_distance(double t, double y0, double y1, double precision, double& lo, double& hi) const;

    /// Upper bound on the distance from any point of [a, b] x {y}: every such
    /// point sees the graph value at its own time.
    [[nodiscard]] double spread_bound(double a, double b, double y) const;

    /// Upper bound on the same sup, within `precision` of the smallest r for
    /// which the window [b - r, a + r] shared by all points reaches y. Never
    /// worse than the Lipschitz bound `start` = distance at the midpoint + (b - a)/2.
    [[nodiscard]] double shared_window_bound(double a, double b, double y, double start, double precision) const;

private:
    // Min and max of run values over runs whose closed time span meets [a, b].
    void window_range(double a, double b, double& lo, double& hi) const;
    std::size_t first_run_meeting(double a) const;
    std::size_t last_run_meeting(double b) const;

    std::size_t n_;
    std::vector<Segment> segments_;
    std::vector<double> run_values_;
    // run_of_[k]: run containing grid cell [k/n, (k+1)/n), with k = n for t = 1.
    std::vector<std::size_t> run_of_;
    std::vector<std::vector<double>> min_table_;
    std::vector<std::vector<double>> max_table_;
    std::vector<unsigned> log2_;
};

CompletedGraph completed_graph(const StepPath& path);

/// sup over points of g1 of the l-infinity distance to g2, within `tol`
/// (the returned value is a certified lower end: the true sup lies in
/// [result, result + tol]).
double directed_hausdorff(const CompletedGraph& g1, const CompletedGraph& g2, double tol = 1e-6);

/// M2 distance: Hausdorff distance between completed graphs under the
/// l-infinity metric on [0,1] x R. Certified to within `tol`.
double d_m2(const StepPath& p1, const StepPath& p2, double tol = 1e-6);

/// Uniform distance, exact on the common refinement grid lcm(n1, n2).
/// Throws ResolutionError if that grid exceeds 10^6 cells.
double d_uniform(const StepPath& p1, const StepPath& p2);

}  // namespace mafclt
