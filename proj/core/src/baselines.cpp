#include "qmean/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qmean {

double empirical_mean(std::span<const double> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical_mean: no samples");
    }
    double sum = 0.0;
    for (double x : samples) {
        sum += x;
    }
    return sum / static_cast<double>(samples.size());
}

double median_of_means(std::span<const double> samples, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("median_of_means: delta must lie in (0, 1)");
    }
    const auto k = static_cast<std::size_t>(std::ceil(-std::log(delta)));
    if (k == 0 || samples.size() < k) {
        throw std::invalid_argument("median_of_means: fewer samples than groups");
    }
    const std::size_t size = samples.size() / k;
    std::vector<double> means;
    means.reserve(k);
    for (std::size_t g = 0; g < k; ++g) {
        means.push_back(empirical_mean(samples.subspan(g * size, size)));
    }
    const auto mid = means.begin() + static_cast<std::ptrdiff_t>((k - 1) / 2);
    std::nth_element(means.begin(), mid, means.end());
    return *mid;
}

double classical_truncated_mean(std::span<const double> samples, double second_moment,
                                std::uint64_t n) {
    if (samples.size() != n || n == 0) {
        throw std::invalid_argument("classical_truncated_mean: expected n samples");
    }
    if (!(second_moment > 0.0)) {
        throw std::invalid_argument("classical_truncated_mean: second moment must be positive");
    }
    const double b = std::sqrt(static_cast<double>(n) * second_moment);
    double sum = 0.0;
    for (double x : samples) {
        if (x < 0.0) {
            throw std::invalid_argument("classical_truncated_mean: negative sample");
        }
        sum += x <= b ? x : 0.0;
    }
    return sum / static_cast<double>(n);
}

namespace {

// Calls f(p0(x), p1(x)) for every x in the union of the supports.
template <class F>
void merge_supports(const FiniteDist& a, const FiniteDist& b, F&& f) {
    const auto xa = a.support();
    const auto xb = b.support();
    const auto pa = a.probs();
    const auto pb = b.probs();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < xa.size() || j < xb.size()) {
        if (j == xb.size() || (i < xa.size() && xa[i] < xb[j])) {
            f(pa[i++], 0.0);
        } else if (i == xa.size() || xb[j] < xa[i]) {
            f(0.0, pb[j++]);
        } else {
            f(pa[i++], pb[j++]);
        }
    }
}

}  // namespace

double kl_divergence(const FiniteDist& p0, const FiniteDist& p1) {
    double sum = 0.0;
    bool infinite = false;
    merge_supports(p0, p1, [&](double a, double b) {
        if (a == 0.0) {
            return;
        }
        if (b == 0.0) {
            infinite = true;
            return;
        }
        sum += a * std::log(a / b);
    });
    if (infinite) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(sum, 0.0);
}

double fidelity(const FiniteDist& p0, const FiniteDist& p1) {
    double sum = 0.0;
    merge_supports(p0, p1, [&](double a, double b) { sum += std::sqrt(a * b); });
    return std::min(sum, 1.0);
}

double helstrom_success(const FiniteDist& p0, const FiniteDist& p1, std::int64_t T) {
    if (T < 1) {
        throw std::invalid_argument("helstrom_success: T must be at least 1");
    }
    const double overlap = std::pow(fidelity(p0, p1), 2.0 * static_cast<double>(T));
    return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - overlap)));
}

std::optional<std::int64_t> distinguish_T_lower(const FiniteDist& p0, const FiniteDist& p1,
                                                double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("distinguish_T_lower: delta must lie in (0, 1)");
    }
    const double kl = kl_divergence(p0, p1);
    if (kl == 0.0) {
        return std::nullopt;
    }
    const double bound = std::ceil(std::log(1.0 / (4.0 * delta)) / kl);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(bound));
}

BoundReport bound_report(const FiniteDist& p0, const FiniteDist& p1, double delta, std::int64_t T) {
    BoundReport r;
    r.kl = kl_divergence(p0, p1);
    r.fidelity = fidelity(p0, p1);
    r.T = T;
    r.helstrom_success = helstrom_success(p0, p1, T);
    r.t_lower = distinguish_T_lower(p0, p1, delta);
    return r;
}

}  // namespace qmean
