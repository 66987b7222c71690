#pragma once

#include <cstdint>
#include <random>

namespace qmean {

/// Seeded pseudo-random stream. A (seed, stream) pair always yields the same
/// sequence; distinct stream ids give statistically independent sequences.
///
/// The distribution helpers are written out here instead of using the
/// <random> distribution templates, whose output is implementation-defined.
/// That keeps sweep CSVs byte-identical across standard libraries.
class RandomSource {
   public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in the inclusive range [lo, hi].
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

    /// True with probability p. p <= 0 never fires, p >= 1 always fires.
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t next_u64() { return engine_(); }

   private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace qmean
