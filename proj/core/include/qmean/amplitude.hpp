#pragma once

#include <cstdint>
#include <vector>

#include "qmean/experiment_counter.hpp"
#include "qmean/log_base.hpp"
#include "qmean/random_source.hpp"

namespace qmean {

// Classical simulation of amplitude amplification and estimation on a known
// amplitude p. Every routine charges two tallies on the counter:
//
//   oracle experiments  applications of the state preparation and the
//                       comparison/rotation oracles (weighted by
//                       per_app_oracle_cost per composite application) plus
//                       one measure_cost per final measurement;
//   AA applications     applications of U, U^dagger and the reflection.

/// theta = asin(sqrt(p)) in [0, pi/2]. Throws unless 0 <= p <= 1.
double grover_angle(double p);

/// sin^2((2n + 1) theta) after n Grover iterations.
double aamp_success_prob(double p, std::uint64_t n);

struct SeqAampResult {
    bool succeeded = false;
    std::uint64_t rounds = 0;
    /// AA applications charged by this call.
    std::uint64_t T = 0;
};

/// Sequential amplitude amplification with geometrically growing random
/// iteration counts (growth factor 1.1). Round l draws n uniformly from
/// {ceil(1.1^(l-1)), ..., max(ceil(1.1^(l-1)), ceil(1.1^l) - 1)}, charges
/// 3n + 1 AA applications and (2n + 1) * per_app_oracle_cost + measure_cost
/// oracle experiments, then succeeds with probability aamp_success_prob(p, n).
///
/// Stops at the first success or when the counter's budget runs out
/// (succeeded = false, counter.interrupted()). Throws std::invalid_argument
/// for p = 0 on an uncapped counter, since that run would never end.
SeqAampResult seq_aamp(double p, RandomSource& rng, ExperimentCounter& counter,
                       std::uint64_t per_app_oracle_cost, std::uint64_t measure_cost = 1);

/// Exact outcome distribution of the M-point phase register of canonical
/// amplitude estimation: Pr[y] = F(y - M w) / 2 + F(y + M w) / 2 with
/// w = theta / pi and the Fejer kernel F(d) = sin^2(pi d) / (M^2 sin^2(pi d / M)).
/// Throws unless M >= 1.
std::vector<double> ae_outcome_dist(double p, std::uint64_t M);

struct AEOutcome {
    std::uint64_t y = 0;
    /// sin^2(pi y / M), exact at the angles where that has a short closed form.
    double p_estimate = 0.0;
};

/// sin^2(pi y / M), returning exact 0, 1/4, 1/2, 3/4, 1 where the reduced
/// fraction y / M has denominator 1, 2, 3, 4 or 6.
double ae_estimate_from_outcome(std::uint64_t y, std::uint64_t M);

/// One canonical amplitude estimation run with M Grover steps. Charges
/// M * 2 * per_app_oracle_cost + measure_cost oracle experiments and 3M AA
/// applications up front, then samples y in O(log M) expected time.
AEOutcome aest_sample(double p, std::uint64_t M, RandomSource& rng, ExperimentCounter& counter,
                      std::uint64_t per_app_oracle_cost, std::uint64_t measure_cost = 1);

/// Lower median of ceil(6 log(1/delta)) independent aest_sample estimates, each
/// with M = ceil(2 pi n / log(1/delta)). Requires n >= log(1/delta).
double aest_median(double p, double n, double delta, RandomSource& rng, ExperimentCounter& counter,
                   std::uint64_t per_app_oracle_cost, LogBase base = LogBase::natural,
                   std::uint64_t measure_cost = 1);

struct SeqAestResult {
    /// 1 / T^2 on success, 0 when the budget ran out first.
    double p_estimate = 0.0;
    std::uint64_t T = 0;
    bool interrupted = false;
};

/// Sequential amplitude estimation: seq_aamp, read off p~ = 1 / T^2.
SeqAestResult seq_aest(double p, RandomSource& rng, ExperimentCounter& counter,
                       std::uint64_t per_app_oracle_cost, std::uint64_t measure_cost = 1);

/// Number of AE repetitions and grid size used by aest_median.
struct AestMedianShape {
    std::uint64_t repetitions = 0;
    std::uint64_t M = 0;
};
AestMedianShape aest_median_shape(double n, double delta, LogBase base);

}  // namespace qmean
