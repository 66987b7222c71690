#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmean/constant_profile.hpp"
#include "qmean/sweep.hpp"

namespace qmean {

/// Linear-interpolation percentile (q in [0, 100]) of unsorted values.
/// Throws std::invalid_argument on empty input or q outside [0, 100].
double percentile(std::vector<double> values, double q);

/// Least-squares slope of ln(y) on ln(x). Throws std::invalid_argument with
/// fewer than 3 points or any non-positive coordinate.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

enum class BoundMode { automatic, none };

struct GroupSummary {
    std::string estimator;
    std::string distribution;
    GridPoint point;
    std::uint64_t count = 0;
    double mean_abs_error = 0.0;
    double median_abs_error = 0.0;
    double p90_abs_error = 0.0;
    double max_abs_error = 0.0;
    /// Human-readable bound ("" when none applies).
    std::string bound;
    std::optional<double> failure_rate;
    double mean_oracle_experiments = 0.0;
    double mean_aa_applications = 0.0;
    double interrupted_rate = 0.0;
};

/// Groups rows by (estimator, distribution, grid point) in order of first
/// appearance. With BoundMode::automatic each group's failure rate is
/// measured against the guarantee of its estimator:
///
///   subgauss              |err| <= sigma log(1/delta) / n
///   relative              |err| <= epsilon |mu|
///   seq-relative          |err| <= epsilon mu
///   bern                  |err| <= sqrt(b mu) log(1/delta)/n + b log(1/delta)^2/n^2,
///                         a = 0, b = max support
///   quantile              Q(p) <= estimate <= Q(c p)
///   seq-bern              |err| <= c_seq mu
///   median-of-means       |err| <= 2 sqrt(sigma^2 ln(1/delta) / n)
///
/// Distributions are re-resolved from the distribution column. Throws
/// std::invalid_argument on empty input.
std::vector<GroupSummary> summarize(const std::vector<SweepRow>& rows, BoundMode mode,
                                    const ConstantProfile& profile);

void write_summary_tsv(std::ostream& out, const std::vector<GroupSummary>& groups);

/// Numeric value of a CSV column ("n", "epsilon", "delta", "p", "trial",
/// "estimate", "true_mean", "abs_error", "rel_error", "oracle_experiments",
/// "aa_applications"); nullopt for an empty field. Throws for unknown names.
std::optional<double> row_value(const SweepRow& row, std::string_view column);

struct SlopeFit {
    double slope = 0.0;
    /// One (mean x, percentile y) point per grid group.
    std::vector<std::pair<double, double>> points;
};

/// Per grid group: mean of column x and the given percentile of column y;
/// then the log-log slope through those points.
SlopeFit slope_from_rows(const std::vector<SweepRow>& rows, std::string_view x,
                         std::string_view y, double pct);

}  // namespace qmean
