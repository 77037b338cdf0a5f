#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace mafclt {

/// Seeded source of uniform bits with the few continuous draws the library needs.
///
/// Floating-point draws are built from raw 64-bit words rather than the
/// standard distributions, whose output is implementation-defined, so a seed
/// reproduces the same numbers with every standard library.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed);

    /// Independent substream identified by a master seed and a path of labels
    /// (experiment tag, grid index, replication, purpose, ...).
    static RandomStream derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

    static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();
    /// Uniform on the open interval (0, 1).
    double uniform_open();
    double uniform(double lo, double hi);
    /// Standard exponential, mean one.
    double exponential();
    bool bernoulli(double p);

private:
    explicit RandomStream(std::seed_seq& seq);

    std::mt19937_64 engine_;
};

}  // namespace mafclt
