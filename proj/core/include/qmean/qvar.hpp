#pragma once

#include <cstdint>

#include "qmean/finite_dist.hpp"

namespace qmean {

/// Oracle experiments charged per application of each primitive.
struct CostWeights {
    std::uint64_t u = 1;        // state preparation U or its inverse
    std::uint64_t oracle = 1;   // comparison C or rotation R
    std::uint64_t measure = 1;  // final measurement M
};

/// A finite random variable together with the cost of touching it. The
/// simulator sees only the value distribution; the garbage register of the
/// state preparation never influences any observable.
struct QVar {
    FiniteDist dist;
    CostWeights costs{};

    explicit QVar(FiniteDist d, CostWeights w = {}) : dist(std::move(d)), costs(w) {}

    /// One application of V = C(U x I) or V = R(U x I).
    std::uint64_t per_application() const { return costs.u + costs.oracle; }

    /// One classical draw: prepare and measure.
    std::uint64_t classical_sample_cost() const { return costs.u + costs.measure; }
};

}  // namespace qmean
