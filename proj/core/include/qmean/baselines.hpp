#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "qmean/finite_dist.hpp"

namespace qmean {

/// Arithmetic mean. Throws std::invalid_argument on empty input.
double empirical_mean(std::span<const double> samples);

/// k = ceil(ln(1/delta)) groups of floor(n/k) consecutive samples (the
/// remainder at the tail is dropped); lower median of the group means.
/// Throws unless 0 < delta < 1 and n >= k.
double median_of_means(std::span<const double> samples, double delta);

/// Empirical mean after zeroing samples above b = sqrt(n * second_moment).
/// Throws on a negative sample, second_moment <= 0, or samples.size() != n.
double classical_truncated_mean(std::span<const double> samples, double second_moment,
                                std::uint64_t n);

/// sum p0(x) ln(p0(x) / p1(x)); +infinity when p0 puts mass where p1 has none.
double kl_divergence(const FiniteDist& p0, const FiniteDist& p1);

/// sum sqrt(p0(x) p1(x)) over the union of supports.
double fidelity(const FiniteDist& p0, const FiniteDist& p1);

/// Optimal success probability for telling T copies of the two
/// distribution-encoding states apart: (1 + sqrt(1 - F^(2T))) / 2.
/// Throws unless T >= 1.
double helstrom_success(const FiniteDist& p0, const FiniteDist& p1, std::int64_t T);

/// ceil(ln(1/(4 delta)) / KL), floored at 1; nullopt (no finite bound) when
/// KL = 0. Throws unless 0 < delta < 1.
std::optional<std::int64_t> distinguish_T_lower(const FiniteDist& p0, const FiniteDist& p1,
                                                double delta);

struct BoundReport {
    double kl = 0.0;
    double fidelity = 0.0;
    std::int64_t T = 1;
    double helstrom_success = 0.5;
    std::optional<std::int64_t> t_lower;
};

BoundReport bound_report(const FiniteDist& p0, const FiniteDist& p1, double delta,
                         std::int64_t T = 1);

}  // namespace qmean
