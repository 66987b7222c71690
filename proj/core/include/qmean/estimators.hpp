#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmean/constant_profile.hpp"
#include "qmean/experiment_counter.hpp"
#include "qmean/qvar.hpp"
#include "qmean/random_source.hpp"

namespace qmean {

/// Result of one estimator call. stage_costs lists oracle experiments per
/// stage in execution order and always sums to oracle_experiments.
struct EstimateReport {
    double estimate = 0.0;
    std::uint64_t oracle_experiments = 0;
    std::uint64_t aa_applications = 0;
    /// The caller-supplied global budget ran out.
    bool interrupted = false;
    std::vector<std::pair<std::string, std::uint64_t>> stage_costs;
    /// Stages that hit a budget, either the global one or a stage's own
    /// interrupt rule (every quantile repetition ends this way).
    std::vector<std::string> interrupted_stages;

    std::uint64_t stage_cost(const std::string& name) const;
};

struct CondSample {
    std::optional<double> y;
    /// Oracle experiments spent by this call.
    std::uint64_t T_oracle = 0;
};

/// Draws from X conditioned on X > x by sequential amplitude amplification on
/// Pr[X > x], then one measurement. Returns no value if the counter's budget
/// runs out first (always the case when Pr[X > x] = 0).
CondSample cond_sample_above(const QVar& X, double x, RandomSource& rng, ExperimentCounter& counter);

/// Quantile estimation: ceil(6 log(1/delta)) repetitions, each chaining
/// conditional samples from -infinity until its ceil(c_prime / sqrt(p)) budget
/// runs out; returns the lower median of the last values reached.
/// Throws std::invalid_argument unless p, delta lie in (0, 1).
EstimateReport quantile_est(const QVar& X, double p, double delta, const ConstantProfile& profile,
                            RandomSource& rng, std::optional<std::uint64_t> budget = std::nullopt);

/// Bernoulli estimator for mu_{a,b} = E[X 1{a < X <= b}]: amplitude
/// estimation on mu_{a,b} / b, scaled back by b. a == b is the empty interval
/// and estimates 0 (still paying for the amplitude estimation).
/// Throws std::invalid_argument unless 0 <= a <= b, n >= log(1/delta) and
/// delta lies in (0, 1).
EstimateReport bern_est(const QVar& X, double n, double a, double b, double delta,
                        RandomSource& rng, LogBase base = LogBase::natural,
                        std::optional<std::uint64_t> budget = std::nullopt);

/// Sub-Gaussian estimator: classical median eta, then for Y+ and Y- a
/// quantile estimate and k + 1 dyadic Bernoulli layers; eta + mu+ - mu-.
/// n is rounded up to a power of two (at least 2).
/// Throws std::invalid_argument unless n >= log(1/delta) and delta in (0, 1).
EstimateReport subgauss_est(const QVar& X, double n, double delta, const ConstantProfile& profile,
                            RandomSource& rng, std::optional<std::uint64_t> budget = std::nullopt);

/// Relative-error estimator: subgauss_est with n = (ch / epsilon) log(1/delta),
/// where ch bounds the coefficient of variation |sigma / mu|.
EstimateReport relative_est(const QVar& X, double ch, double epsilon, double delta,
                            const ConstantProfile& profile, RandomSource& rng,
                            std::optional<std::uint64_t> budget = std::nullopt);

/// Sequential Bernoulli estimator for X in [0, 1]: mu~ = 1 / T^2 from
/// sequential amplitude estimation on mu. mu = 0 needs a budget; the result
/// is then interrupted with estimate 0.
EstimateReport seq_bern_est(const QVar& X, RandomSource& rng,
                            std::optional<std::uint64_t> budget = std::nullopt);

/// Sequential relative-error estimator for X in [0, 1] with no prior
/// knowledge of sigma / mu.
EstimateReport seq_relative_est(const QVar& X, double epsilon, double delta,
                                const ConstantProfile& profile, RandomSource& rng,
                                std::optional<std::uint64_t> budget = std::nullopt);

/// Parameters derived by subgauss_est, exposed for tests and cost models.
struct SubgaussShape {
    std::uint64_t n = 0;       // rounded to a power of two
    std::uint64_t k = 0;       // log2 n
    double m = 0.0;            // layer time parameter
    std::uint64_t classical_samples = 0;
    double quantile_p = 0.0;
};
SubgaussShape subgauss_shape(double n, double delta, const ConstantProfile& profile);

/// Lower median (element (size - 1) / 2 of the sorted values). Throws on empty input.
double lower_median(std::vector<double> values);

}  // namespace qmean
