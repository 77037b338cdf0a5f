#include "mafclt/random.hpp"

#include <cmath>
#include <vector>

namespace mafclt {

namespace {

void push_words(std::vector<std::uint32_t>& words, std::uint64_t value) {
    words.push_back(static_cast<std::uint32_t>(value & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(value >> 32));
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream::RandomStream(std::seed_seq& seq) : engine_(seq) {}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 * (path.size() + 2));
    push_words(words, master_seed);
    push_words(words, path.size());
    for (std::uint64_t label : path) push_words(words, label);
    std::seed_seq seq(words.begin(), words.end());
    return RandomStream(seq);
}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * kTwoPow53Inv;
}

double RandomStream::uniform_open() {
    // Midpoints of the 2^53 cells: never 0, never 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPow53Inv;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RandomStream::exponential() {
    return -std::log(uniform_open());
}

bool RandomStream::bernoulli(double p) {
    return uniform() < p;
}

}  // namespace mafclt
