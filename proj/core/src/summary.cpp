#include "qmean/summary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "qmean/dist_spec.hpp"
#include "qmean/finite_dist.hpp"

namespace qmean {

namespace {

using GroupKey = std::tuple<std::string, std::string, std::optional<double>, std::optional<double>,
                            std::optional<double>, std::optional<double>>;

GroupKey key_of(const SweepRow& r) {
    return {r.estimator, r.distribution, r.point.n, r.point.epsilon, r.point.delta, r.point.p};
}

// Rows grouped by key, groups in order of first appearance.
std::vector<std::vector<const SweepRow*>> group_rows(const std::vector<SweepRow>& rows) {
    std::map<GroupKey, std::size_t> index;
    std::vector<std::vector<const SweepRow*>> groups;
    for (const SweepRow& r : rows) {
        const auto [it, fresh] = index.try_emplace(key_of(r), groups.size());
        if (fresh) {
            groups.emplace_back();
        }
        groups[it->second].push_back(&r);
    }
    return groups;
}

struct Bound {
    std::string text;
    std::function<bool(const SweepRow&)> fails;
};

std::optional<Bound> bound_for(const SweepRow& first, const FiniteDist& dist,
                               const ConstantProfile& profile) {
    const EstimatorKind kind = parse_estimator(first.estimator);
    const GridPoint& g = first.point;
    const Moments m = moments(dist);
    const double sigma = std::sqrt(m.variance);
    const auto abs_bound = [](double b) -> Bound {
        return {format_double(b), [b](const SweepRow& r) { return r.abs_error > b; }};
    };
    switch (kind) {
        case EstimatorKind::subgauss:
            return abs_bound(sigma * log_inv(*g.delta, profile.log_base) / *g.n);
        case EstimatorKind::relative:
        case EstimatorKind::seq_relative:
            return abs_bound(*g.epsilon * std::abs(m.mean));
        case EstimatorKind::bern: {
            const double b = std::max(0.0, dist.max());
            const double mu = b > 0.0 ? truncated_mean(dist, 0.0, b) : 0.0;
            const double L = log_inv(*g.delta, profile.log_base);
            const double n = *g.n;
            return abs_bound(std::sqrt(b * mu) * L / n + b * L * L / (n * n));
        }
        case EstimatorKind::quantile: {
            const double lo = quantile(dist, *g.p);
            const double hi = quantile(dist, std::min(1.0, profile.c * *g.p));
            return Bound{"[" + format_double(lo) + "," + format_double(hi) + "]",
                         [lo, hi](const SweepRow& r) {
                             return r.estimate < lo || r.estimate > hi;
                         }};
        }
        case EstimatorKind::seq_bern:
            return abs_bound(profile.c_seq * m.mean);
        case EstimatorKind::median_of_means:
            return abs_bound(2.0 * std::sqrt(m.variance * -std::log(*g.delta) / *g.n));
        case EstimatorKind::empirical:
        case EstimatorKind::classical_truncated:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

double percentile(std::vector<double> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("percentile: empty input");
    }
    if (!(q >= 0.0 && q <= 100.0)) {
        throw std::invalid_argument("percentile: q must lie in [0, 100]");
    }
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) {
        throw std::invalid_argument("fit_loglog_slope: need at least 3 points");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) {
            throw std::invalid_argument("fit_loglog_slope: coordinates must be positive");
        }
        sx += std::log(x);
        sy += std::log(y);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_loglog_slope: all x values coincide");
    }
    return sxy / sxx;
}

std::vector<GroupSummary> summarize(const std::vector<SweepRow>& rows, BoundMode mode,
                                    const ConstantProfile& profile) {
    if (rows.empty()) {
        throw std::invalid_argument("summarize: no rows");
    }
    std::map<std::string, FiniteDist> dists;
    std::vector<GroupSummary> out;
    for (const auto& group : group_rows(rows)) {
        const SweepRow& first = *group.front();
        GroupSummary s;
        s.estimator = first.estimator;
        s.distribution = first.distribution;
        s.point = first.point;
        s.count = group.size();

        std::vector<double> errors;
        errors.reserve(group.size());
        std::uint64_t interrupted = 0;
        for (const SweepRow* r : group) {
            errors.push_back(r->abs_error);
            s.mean_abs_error += r->abs_error;
            s.mean_oracle_experiments += static_cast<double>(r->oracle_experiments);
            s.mean_aa_applications += static_cast<double>(r->aa_applications);
            interrupted += r->interrupted ? 1 : 0;
        }
        const double count = static_cast<double>(group.size());
        s.mean_abs_error /= count;
        s.mean_oracle_experiments /= count;
        s.mean_aa_applications /= count;
        s.interrupted_rate = static_cast<double>(interrupted) / count;
        s.median_abs_error = percentile(errors, 50.0);
        s.p90_abs_error = percentile(errors, 90.0);
        s.max_abs_error = *std::max_element(errors.begin(), errors.end());

        if (mode == BoundMode::automatic) {
            auto it = dists.find(first.distribution);
            if (it == dists.end()) {
                it = dists.emplace(first.distribution, resolve_distribution(first.distribution)).first;
            }
            if (const auto bound = bound_for(first, it->second, profile)) {
                std::uint64_t failures = 0;
                for (const SweepRow* r : group) {
                    failures += bound->fails(*r) ? 1 : 0;
                }
                s.bound = bound->text;
                s.failure_rate = static_cast<double>(failures) / count;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_summary_tsv(std::ostream& out, const std::vector<GroupSummary>& groups) {
    const auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string();
    };
    out << "estimator\tdistribution\tn\tepsilon\tdelta\tp\tcount\tmean_abs_error\t"
           "median_abs_error\tp90_abs_error\tmax_abs_error\tbound\tfailure_rate\t"
           "mean_oracle_experiments\tmean_aa_applications\tinterrupted_rate\n";
    for (const GroupSummary& g : groups) {
        out << g.estimator << '\t' << g.distribution << '\t' << opt(g.point.n) << '\t'
            << opt(g.point.epsilon) << '\t' << opt(g.point.delta) << '\t' << opt(g.point.p) << '\t'
            << g.count << '\t' << format_double(g.mean_abs_error) << '\t'
            << format_double(g.median_abs_error) << '\t' << format_double(g.p90_abs_error) << '\t'
            << format_double(g.max_abs_error) << '\t' << g.bound << '\t' << opt(g.failure_rate)
            << '\t' << format_double(g.mean_oracle_experiments) << '\t'
            << format_double(g.mean_aa_applications) << '\t' << format_double(g.interrupted_rate)
            << '\n';
    }
}

std::optional<double> row_value(const SweepRow& row, std::string_view column) {
    if (column == "n") return row.point.n;
    if (column == "epsilon") return row.point.epsilon;
    if (column == "delta") return row.point.delta;
    if (column == "p") return row.point.p;
    if (column == "trial") return static_cast<double>(row.trial);
    if (column == "estimate") return row.estimate;
    if (column == "true_mean") return row.true_mean;
    if (column == "abs_error") return row.abs_error;
    if (column == "rel_error") return row.rel_error;
    if (column == "oracle_experiments") return static_cast<double>(row.oracle_experiments);
    if (column == "aa_applications") return static_cast<double>(row.aa_applications);
    throw std::invalid_argument("unknown numeric column '" + std::string(column) + "'");
}

SlopeFit slope_from_rows(const std::vector<SweepRow>& rows, std::string_view x, std::string_view y,
                         double pct) {
    SlopeFit fit;
    for (const auto& group : group_rows(rows)) {
        double xsum = 0.0;
        std::vector<double> ys;
        for (const SweepRow* r : group) {
            const auto xv = row_value(*r, x);
            const auto yv = row_value(*r, y);
            if (!xv || !yv) {
                throw std::invalid_argument("slope: empty field in column " +
                                            std::string(xv ? y : x));
            }
            xsum += *xv;
            ys.push_back(*yv);
        }
        fit.points.emplace_back(xsum / static_cast<double>(group.size()), percentile(ys, pct));
    }
    fit.slope = fit_loglog_slope(fit.points);
    return fit;
}

}  // namespace qmean
