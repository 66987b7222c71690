#include "qmean/random_source.hpp"

#include <limits>
#include <stdexcept>

namespace qmean {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream),
        static_cast<std::uint32_t>(stream >> 32),
        0x9e3779b9u,
    };
    return std::mt19937_64(seq);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(seeded_engine(seed, stream)) {}

double RandomSource::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomSource::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (hi < lo) {
        throw std::invalid_argument("uniform_int: empty range");
    }
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) {
        return engine_();
    }
    const std::uint64_t range = span + 1;
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    // 2^64 mod range; draws in the top partial bucket are rejected.
    const std::uint64_t rem = (kMax % range + 1) % range;
    const std::uint64_t last_ok = kMax - rem;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x > last_ok);
    return lo + x % range;
}

}  // namespace qmean
