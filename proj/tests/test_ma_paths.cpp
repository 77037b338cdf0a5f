#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "mafclt/errors.hpp"
#include "mafclt/ma_paths.hpp"

using namespace mafclt;

namespace {

CoeffDraw fixed(std::vector<double> c) {
    RandomStream rng(0);
    const std::size_t k = c.size() - 1;
    return draw_coefficients(FiniteCoefficients{std::move(c)}, k, rng);
}

// Heavy-tailed window Z_{first}..Z_{last}.
InnovationWindow heavy_window(double alpha, std::ptrdiff_t first, std::ptrdiff_t last, std::uint64_t seed) {
    RandomStream rng(seed);
    return InnovationWindow::sample(TailSpec::regular(alpha, alpha == 1.0 ? 0.5 : 0.6), first, last, rng);
}

}  // namespace

TEST_CASE("moving average by hand") {
    const InnovationWindow w(0, {1.0, 2.0, 3.0});
    CHECK(build_ma_series(fixed({1.0, 1.0}), w, 2) == std::vector<double>{3.0, 5.0});
    const InnovationWindow z(1, {4.0, -1.0, 2.5});
    CHECK(build_ma_series(fixed({1.0}), z, 3) == std::vector<double>{4.0, -1.0, 2.5});
    CHECK_THROWS_AS(build_ma_series(fixed({1.0, 1.0}), z, 3), DomainError);
    CHECK_THROWS_AS(build_ma_series(fixed({1.0}), z, 4), DomainError);
}

TEST_CASE("doubling the horizon stays within the certified bound") {
    RandomStream rng(1);
    const GeometricCoefficients g{1.0, 0.7};
    const CoeffDraw d10 = draw_coefficients(g, 10, rng);
    const CoeffDraw d20 = draw_coefficients(g, 20, rng);
    const InnovationWindow w = heavy_window(1.5, -19, 200, 4);
    const auto x10 = build_ma_series(d10, w, 200);
    const auto x20 = build_ma_series(d20, w, 200);
    const double bound = truncation_error_bound(d10, w);
    for (std::size_t i = 0; i < 200; ++i) CHECK(std::abs(x10[i] - x20[i]) <= bound * (1.0 + 1e-12));
}

TEST_CASE("partial sum paths") {
    const std::vector<double> zeros(5, 0.0);
    const StepPath p0 = partial_sum_path(zeros, 2.0);
    for (double v : p0.values) CHECK(v == 0.0);
    const std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(partial_sum_path(ones, 1.0).values == std::vector<double>{0.0, 1.0, 2.0, 3.0});
    CHECK_THROWS_AS(partial_sum_path(ones, 0.0), DomainError);

    const InnovationWindow w = heavy_window(0.8, 1, 300, 2);
    const auto z = innovation_series(w, 300);
    const StepPath p = partial_sum_path(z, 7.0);
    double total = 0.0;
    for (double v : z) total += v;
    CHECK(p.values.back() == doctest::Approx(total / 7.0).epsilon(1e-12));
    CHECK(p(0.0) == 0.0);
    CHECK(p(1.0) == p.values[300]);
    CHECK(p(0.5) == p.values[150]);
    CHECK(p(0.5 - 1e-9) == p.values[149]);

    std::vector<double> scaled(z);
    for (double& v : scaled) v *= -3.5;
    const StepPath ps = partial_sum_path(scaled, 7.0);
    for (std::size_t k = 0; k <= 300; ++k)
        CHECK(ps.values[k] == doctest::Approx(-3.5 * p.values[k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("identity filter reproduces the innovation path") {
    const InnovationWindow w = heavy_window(1.2, 1, 500, 3);
    const StepPath v = partial_sum_path(build_ma_series(fixed({1.0}), w, 500), 11.0);
    const StepPath vz = partial_sum_path(innovation_series(w, 500), 11.0);
    CHECK(v.values == vz.values);
}

TEST_CASE("truncated series") {
    const InnovationWindow w = heavy_window(1.5, -4, 50, 5);
    const CoeffDraw d = fixed({1.0, 0.5});
    const auto x1 = truncated_ma_series(d, 1, w, 50);
    for (std::ptrdiff_t i = 1; i <= 50; ++i)
        CHECK(x1[static_cast<std::size_t>(i - 1)] == doctest::Approx(w[i] + 0.5 * w[i - 1]).epsilon(1e-15));
    // With no tail, q = K reproduces the full series.
    const CoeffDraw d3 = fixed({0.3, -0.2, 0.9, 0.4});
    const auto full = build_ma_series(d3, w, 50);
    const auto trunc = truncated_ma_series(d3, 3, w, 50);
    for (std::size_t i = 0; i < 50; ++i) CHECK(trunc[i] == doctest::Approx(full[i]).epsilon(1e-14));
    CHECK_THROWS_AS(truncated_ma_series(d3, 4, w, 50), DomainError);

    // Weights sum to C for every q: feed a constant window.
    RandomStream rng(6);
    const CoeffDraw r = draw_coefficients(IidScaledCoefficients{BaseLaw::uniform, 1.0, 0.6}, 30, rng);
    const InnovationWindow ones(-40, std::vector<double>(100, 1.0));
    for (std::size_t q = 0; q <= 30; ++q)
        CHECK(truncated_ma_series(r, q, ones, 5)[2] == doctest::Approx(r.total).epsilon(1e-14));
}

TEST_CASE("decomposition by hand for C = (1, 1)") {
    // q = 1, k = 1: H = Z_1 C_1, G = Z_0 C_1.
    const InnovationWindow w(0, {0.5, 2.0, -3.0, 4.0});
    const std::vector<double> c{1.0, 1.0};
    const Decomposition d = partial_sum_decomposition(DecompositionCase::long_prefix, 1, 3, c, w, 1.0);
    CHECK(*d.recent == 2.0);
    CHECK(*d.presample == 0.5);
    CHECK(d.lhs == doctest::Approx(1.5));
    CHECK(d.residual <= 1e-15);

    // q = 2, C = (1, 1, 1), k = 2: H = Z_2 (C_1 + C_2) + Z_1 C_2, G = Z_0 (C_1 + C_2) + Z_{-1} C_2.
    const InnovationWindow w2(-1, {0.25, 0.5, 2.0, -3.0, 4.0, 1.0});
    const std::vector<double> c2{1.0, 1.0, 1.0};
    const Decomposition d2 = partial_sum_decomposition(DecompositionCase::long_prefix, 2, 4, c2, w2, 1.0);
    CHECK(*d2.recent == doctest::Approx(-3.0 * 2.0 + 2.0));
    CHECK(*d2.presample == doctest::Approx(0.5 * 2.0 + 0.25));
    CHECK(d2.residual <= 1e-14);
}

TEST_CASE("zero coefficients give a zero decomposition") {
    const InnovationWindow w = heavy_window(0.6, -5, 40, 7);
    const std::vector<double> c(6, 0.0);
    for (auto which : {DecompositionCase::short_prefix, DecompositionCase::long_prefix, DecompositionCase::lagged}) {
        const std::size_t k = which == DecompositionCase::short_prefix ? 3 : 10;
        const Decomposition d = partial_sum_decomposition(which, k, 40, c, w, 2.0);
        CHECK(d.lhs == 0.0);
        CHECK(d.rhs == 0.0);
    }
}

TEST_CASE("decomposition index constraints") {
    const InnovationWindow w = heavy_window(0.6, -5, 40, 7);
    const std::vector<double> c(4, 1.0);
    CHECK_THROWS_AS(partial_sum_decomposition(DecompositionCase::short_prefix, 3, 40, c, w, 1.0), DomainError);
    CHECK_THROWS_AS(partial_sum_decomposition(DecompositionCase::long_prefix, 2, 40, c, w, 1.0), DomainError);
    CHECK_THROWS_AS(partial_sum_decomposition(DecompositionCase::lagged, 38, 40, c, w, 1.0), DomainError);
    CHECK_THROWS_AS(partial_sum_decomposition(DecompositionCase::lagged, 2, 40, c, w, 1.0), DomainError);
}

TEST_CASE("decomposition identities on random configurations") {
    RandomStream rng(2024);
    for (auto which : {DecompositionCase::short_prefix, DecompositionCase::long_prefix, DecompositionCase::lagged}) {
        for (int rep = 0; rep < 200; ++rep) {
            const std::size_t q = 1 + rng() % 20;
            const std::size_t n = 2 * q + rng() % (500 - 2 * q + 1);
            std::size_t k = 0;
            if (which == DecompositionCase::short_prefix) k = rng() % q;
            if (which == DecompositionCase::long_prefix) k = q + rng() % (n - q + 1);
            if (which == DecompositionCase::lagged) k = q + rng() % (n - 2 * q + 1);
            std::vector<double> c(q + 1);
            for (double& v : c) v = rng.uniform(-1.0, 1.0);
            const double alpha = std::vector<double>{0.6, 1.0, 1.5}[rng() % 3];
            const InnovationWindow w = heavy_window(alpha, 1 - static_cast<std::ptrdiff_t>(q),
                                                    static_cast<std::ptrdiff_t>(n), rng());
            const double a_n = normalizer_a(TailSpec::regular(alpha, alpha == 1.0 ? 0.5 : 0.6), static_cast<double>(n));
            const Decomposition d = partial_sum_decomposition(which, k, n, c, w, a_n);
            CHECK(d.residual <= 1e-9 * (1.0 + std::abs(d.lhs)));
        }
    }
}

TEST_CASE("path CSV round trip") {
    const StepPath p(4, {0.0, 1.5, -2.25, 1e-300, 3.0 / 7.0});
    std::stringstream buffer;
    write_csv(buffer, p);
    const std::string text = buffer.str();
    CHECK(text.rfind("k,k/n,value\n0,0,0\n1,0.25,1.5\n", 0) == 0);
    const StepPath back = read_csv(buffer);
    CHECK(back.n == 4);
    CHECK(back.values == p.values);

    std::stringstream bad("k,k/n,value\n0,0,1\n2,0.5,3\n");
    CHECK_THROWS_AS(read_csv(bad), ConfigError);
    std::stringstream junk("k,k/n,value\n0,0,abc\n1,1,2\n");
    CHECK_THROWS_AS(read_csv(junk), ConfigError);
    CHECK_THROWS_AS(StepPath(2, {0.0, 1.0}), DomainError);
}
