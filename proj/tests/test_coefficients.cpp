#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <vector>

#include "mafclt/coefficients.hpp"
#include "mafclt/errors.hpp"
#include "mafclt/numerics.hpp"

using namespace mafclt;

TEST_CASE("finite and geometric draws") {
    RandomStream rng(1);
    const CoeffDraw d = draw_coefficients(FiniteCoefficients{{1.0, 0.5, 0.25}}, 2, rng);
    CHECK(d.values == std::vector<double>{1.0, 0.5, 0.25});
    CHECK(d.tail_bound == 0.0);
    CHECK(d.total == 1.75);

    const CoeffDraw g = draw_coefficients(GeometricCoefficients{1.0, 0.5}, 3, rng);
    CHECK(g.values == std::vector<double>{1.0, 0.5, 0.25, 0.125});
    CHECK(g.tail_bound == 0.125);
    CHECK(g.tail_value == 0.125);
    CHECK(g.total == 2.0);

    // Horizon shorter than the list folds the rest into the tail.
    const CoeffDraw s = draw_coefficients(FiniteCoefficients{{1.0, -0.5, 0.25}}, 0, rng);
    CHECK(s.values.size() == 1);
    CHECK(s.tail_value == -0.25);
    CHECK(s.tail_bound == 0.75);
    CHECK(s.total == 0.75);
}

TEST_CASE("power-law tail matches the Hurwitz zeta") {
    RandomStream rng(1);
    const CoeffDraw d = draw_coefficients(PowerCoefficients{2.0, 2.5}, 10, rng);
    CHECK(d.total == doctest::Approx(2.0 * boost::math::zeta(2.5)).epsilon(1e-13));
    CHECK(d.values[3] == doctest::Approx(2.0 * std::pow(4.0, -2.5)));
}

TEST_CASE("iid scaled coefficients stay under their envelope") {
    RandomStream rng(2);
    for (BaseLaw base : {BaseLaw::uniform, BaseLaw::bernoulli}) {
        const IidScaledCoefficients m{base, 3.0, 0.6};
        for (int rep = 0; rep < 100; ++rep) {
            const CoeffDraw d = draw_coefficients(m, 30, rng);
            for (std::size_t j = 0; j <= 30; ++j) CHECK(std::abs(d.values[j]) <= 3.0 * std::pow(0.6, double(j)) + 1e-15);
            CHECK(d.tail_bound == doctest::Approx(3.0 * std::pow(0.6, 31.0) / 0.4));
            CHECK_FALSE(d.tail_exact);
        }
    }
}

TEST_CASE("spike model has exactly one nonzero coefficient") {
    RandomStream rng(3);
    const SpikeCoefficients m{0.3, 0.1, 0.5};
    for (int rep = 0; rep < 2000; ++rep) {
        const CoeffDraw d = draw_coefficients(m, 50, rng);
        int nonzero = 0;
        for (std::size_t j = 0; j < d.values.size(); ++j)
            if (d.values[j] != 0.0) {
                ++nonzero;
                CHECK(d.values[j] == double(j));
            }
        if (d.tail_value != 0.0) {
            ++nonzero;
            CHECK(d.tail_value > 50.0);
            CHECK(d.tail_value == std::floor(d.tail_value));
        }
        CHECK(nonzero == 1);
        CHECK(d.values[0] == 0.0);
    }
    CHECK_THROWS_AS(draw_coefficients(SpikeCoefficients{0.3, 0.3, 0.5}, 5, rng), ConfigError);
}

TEST_CASE("spike model moments match the analytic law") {
    // E|C_i|^delta = i^{-(1+eps)} / S, estimated from 1e5 draws.
    RandomStream rng(4);
    const SpikeCoefficients m{0.3, 0.1, 0.5};
    const int draws = 100000;
    std::vector<double> sum(11, 0.0);
    std::vector<double> sum_sq(11, 0.0);
    for (int rep = 0; rep < draws; ++rep) {
        const CoeffDraw d = draw_coefficients(m, 10, rng);
        for (std::size_t i = 1; i <= 10; ++i) {
            const double v = std::pow(std::abs(d.values[i]), m.delta);
            sum[i] += v;
            sum_sq[i] += v * v;
        }
    }
    const double s = spike_normalizer(m);
    CHECK(s == doctest::Approx(boost::math::zeta(1.4)).epsilon(1e-12));
    for (std::size_t i = 1; i <= 10; ++i) {
        const double mean = sum[i] / draws;
        const double se = std::sqrt((sum_sq[i] / draws - mean * mean) / draws);
        const double expected = std::pow(double(i), -1.1) / s;
        CHECK(*abs_moment(m, i, m.delta) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(std::abs(mean - expected) <= 3.0 * se);
    }
}

TEST_CASE("sandwich condition") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{1.0, -2.0};
    const std::vector<double> c{2.0, -1.0, 1.0};
    const std::vector<double> zero{1.0, -1.0};
    CHECK(check_sandwich(a) == SandwichVerdict::holds);
    CHECK(check_sandwich(b) == SandwichVerdict::violated);
    CHECK(check_sandwich(c) == SandwichVerdict::holds);
    CHECK(check_sandwich(zero) == SandwichVerdict::indeterminate);

    RandomStream rng(9);
    for (int rep = 0; rep < 1000; ++rep) {
        std::vector<double> v(1 + rng() % 40);
        for (double& x : v) x = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 10.0);
        v[0] += 1e-3;
        CHECK(check_sandwich(v) == SandwichVerdict::holds);
        std::vector<double> neg(v);
        for (double& x : neg) x = -x;
        CHECK(check_sandwich(neg) == SandwichVerdict::holds);

        std::vector<double> mixed(v.size());
        for (double& x : mixed) x = rng.uniform(-1.0, 1.0);
        const double scale = std::exp(rng.uniform(-20.0, 20.0));
        std::vector<double> scaled(mixed);
        for (double& x : scaled) x *= scale;
        CHECK(check_sandwich(scaled) == check_sandwich(mixed));
    }
}

TEST_CASE("tail sums") {
    RandomStream rng(1);
    const CoeffDraw g = draw_coefficients(GeometricCoefficients{1.0, 0.5}, 10, rng);
    CHECK(tail_sum(g, 3).c_prime == doctest::Approx(0.25).epsilon(1e-15));
    const CoeffDraw f = draw_coefficients(FiniteCoefficients{{1.0, 0.5, 0.25}}, 2, rng);
    CHECK(tail_sum(f, 0).c_prime == 1.75);
    CHECK_THROWS_AS((void)tail_sum(f, 3), DomainError);

    for (int rep = 0; rep < 200; ++rep) {
        const CoeffDraw d = draw_coefficients(IidScaledCoefficients{BaseLaw::uniform, 2.0, 0.8}, 25, rng);
        for (std::size_t q = 0; q < 25; ++q) {
            const TailSums t = tail_sum(d, q);
            CHECK(t.c_double_prime == tail_sum(d, q + 1).c_prime);
            CHECK(std::abs(t.c_prime - d.values[q] - t.c_double_prime) <= 4e-16 * (std::abs(t.c_prime) + 1.0));
        }
    }
}

TEST_CASE("automatic horizon certifies the tail") {
    const std::size_t k = auto_horizon(GeometricCoefficients{1.0, 0.5});
    RandomStream rng(1);
    const CoeffDraw d = draw_coefficients(GeometricCoefficients{1.0, 0.5}, k, rng);
    double head = 0.0;
    for (double v : d.values) head += std::abs(v);
    CHECK(d.tail_bound <= 1e-8 * (head + 1.0));
    const CoeffDraw shorter = draw_coefficients(GeometricCoefficients{1.0, 0.5}, k - 1, rng);
    CHECK(shorter.tail_bound > 1e-8 * (head + 1.0));
    CHECK(auto_horizon(FiniteCoefficients{{1.0, 2.0, 3.0}}) == 2);
    CHECK_THROWS_AS((void)auto_horizon(PowerCoefficients{1.0, 1.2}), ConfigError);
}

TEST_CASE("moment diagnostics") {
    RandomStream rng(12);
    const std::vector<std::size_t> grid{10, 20, 40};
    const MomentExponents ex{0.5, 0.8, 1.2};

    const DiagnosticsReport iid =
        moment_diagnostics(IidScaledCoefficients{BaseLaw::uniform, 1.0, 0.5}, ex, grid, 2000, rng);
    CHECK(iid.tail_condition == Verdict::pass);
    CHECK(iid.rows[0].tail_condition.value > iid.rows[1].tail_condition.value);
    CHECK(iid.rows[1].tail_condition.value > iid.rows[2].tail_condition.value);
    CHECK(iid.rows[0].tail_condition.std_error > 0.0);

    const SpikeCoefficients spike{0.3, 0.1, 0.5};
    const DiagnosticsReport rem = moment_diagnostics(spike, {0.3, 0.5, 1.2}, grid, 10, rng);
    CHECK(rem.delta_moments == Verdict::pass);
    CHECK(rem.gamma_moments == Verdict::fail);
    CHECK(rem.tail_condition == Verdict::fail);
    CHECK(rem.rows[2].delta_sum.value == doctest::Approx(power_partial_sum(1.1, 40.0) / spike_normalizer(spike)));

    const FiniteCoefficients fin{{1.0, -0.5, 0.25}};
    const DiagnosticsReport f = moment_diagnostics(fin, ex, std::vector<std::size_t>{2, 3, 4}, 5, rng);
    CHECK(f.rows[1].delta_sum.value == doctest::Approx(1.0 + std::sqrt(0.5) + 0.5));
    CHECK(f.rows[1].gamma_sum.value == doctest::Approx(1.0 + std::pow(0.5, 0.8) + std::pow(0.25, 0.8)));
    CHECK(f.rows[0].tail_condition.value ==
          doctest::Approx(std::pow(std::log(2.0), 2.2) * std::pow(0.25, 0.7) * std::pow(0.25, 0.5)));
    CHECK(f.rows[1].tail_condition.value == 0.0);
    CHECK(f.delta_moments == Verdict::pass);
    CHECK(f.tail_condition == Verdict::pass);

    CHECK_THROWS_AS(moment_diagnostics(fin, ex, grid, 0, rng), ConfigError);
}
