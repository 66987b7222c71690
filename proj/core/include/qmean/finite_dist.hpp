#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qmean/random_source.hpp"

namespace qmean {

/// Tolerance used when comparing accumulated probabilities (tail sums,
/// quantile thresholds). Accumulating many atoms in double precision can
/// miss an exact threshold such as Pr[X >= 100] = 0.01 by a few ulps.
inline constexpr double kProbTolerance = 1e-12;

/// A finite real-valued distribution: strictly increasing finite support
/// with positive probabilities summing to one.
///
/// Instances are immutable once built and are safe to share across threads.
class FiniteDist {
   public:
    /// Builds a distribution from (value, probability) lists. Duplicate values
    /// are merged (exact equality), zero-probability atoms are dropped and the
    /// result is renormalized.
    ///
    /// Throws std::invalid_argument on empty or mismatched input, non-finite
    /// values, negative probabilities, or a total that deviates from 1 by
    /// more than 1e-9.
    static FiniteDist make(std::span<const double> values, std::span<const double> probs);

    /// Point mass at `value`.
    static FiniteDist point(double value);

    std::span<const double> support() const { return support_; }
    std::span<const double> probs() const { return probs_; }
    std::size_t size() const { return support_.size(); }
    double min() const { return support_.front(); }
    double max() const { return support_.back(); }

    /// Index of the first atom strictly greater than x (size() if none).
    std::size_t first_above(double x) const;

    /// Pr[X > x], summed from the top atom down.
    double tail_above(double x) const;

    /// Pr[X >= x], summed from the top atom down.
    double tail_at_least(double x) const;

    /// Draws one value.
    double sample(RandomSource& rng) const;

    /// Draws one value from X conditioned on X > x. Requires tail_above(x) > 0.
    double sample_above(double x, RandomSource& rng) const;

    bool operator==(const FiniteDist& other) const = default;

    /// Same contract as make(), taking (value, probability) pairs.
    static FiniteDist from_atoms(std::vector<std::pair<double, double>> atoms);

   private:
    FiniteDist() = default;

    std::vector<double> support_;
    std::vector<double> probs_;
    // suffix_[i] = sum of probs_[i..]; suffix_[size()] = 0.
    std::vector<double> suffix_;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double second_moment = 0.0;
};

/// Exact weighted sums over the support.
Moments moments(const FiniteDist& d);

/// Tail-oriented quantile: the largest support value x with Pr[X >= x] >= p.
/// Throws std::invalid_argument unless 0 < p <= 1.
double quantile(const FiniteDist& d, double p);

/// E[X 1{a < X <= b}]. Throws std::invalid_argument when a >= b.
double truncated_mean(const FiniteDist& d, double a, double b);

/// Distributions of Y+ = (X - eta) 1{X >= eta} and Y- = -(X - eta) 1{X <= eta}.
std::pair<FiniteDist, FiniteDist> shift_split(const FiniteDist& d, double eta);

/// Distribution of (X - X')^2 / 2 for an independent copy X'. Enumerates all
/// |support|^2 pairs, so keep supports to roughly 1e4 atoms or fewer.
FiniteDist pair_square_diff(const FiniteDist& d);

struct ConditionalDist {
    /// X conditioned on X > x; empty when the tail has no mass.
    std::optional<FiniteDist> dist;
    /// Pr[X > x].
    double tail = 0.0;
};

/// Conditions on X > x. x may be -infinity (identity) or +infinity (empty).
ConditionalDist conditional_above(const FiniteDist& d, double x);

/// Distribution of scale * X + shift (scale must be non-zero).
FiniteDist scale_shift(const FiniteDist& d, double scale, double shift);

/// Two-point instances on {0, b} and {0, -b}, each with atom probability
/// 1/m^2 and b = m sigma / sqrt(1 - 1/m^2); both have variance sigma^2.
/// Throws std::invalid_argument unless m > 1 and sigma > 0.
std::pair<FiniteDist, FiniteDist> hard_instance_subgaussian(double m, double sigma);

struct StateBasedInstance {
    FiniteDist p0;
    FiniteDist p1;
    double alpha = 0.0;
    double b = 0.0;
};

/// Two distributions on {0, b}, b = m sigma / sqrt(m - 1), with
/// p0(b) = e^alpha / m, p1(b) = 1 / m and alpha = 2 ln(1 + sqrt(1 - 1/m)).
/// Throws std::invalid_argument when m <= 1, sigma <= 0 or e^alpha / m >= 1.
StateBasedInstance hard_instance_statebased(double m, double sigma);

}  // namespace qmean
