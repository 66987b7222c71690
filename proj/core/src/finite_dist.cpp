#include "qmean/finite_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qmean {

FiniteDist FiniteDist::make(std::span<const double> values, std::span<const double> probs) {
    if (values.size() != probs.size()) {
        throw std::invalid_argument("make_dist: values and probs differ in length");
    }
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        atoms.emplace_back(values[i], probs[i]);
    }
    return from_atoms(std::move(atoms));
}

FiniteDist FiniteDist::point(double value) {
    return from_atoms({{value, 1.0}});
}

FiniteDist FiniteDist::from_atoms(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) {
        throw std::invalid_argument("make_dist: empty distribution");
    }
    double total = 0.0;
    for (const auto& [value, prob] : atoms) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument("make_dist: non-finite support value");
        }
        if (!(prob >= 0.0) || !std::isfinite(prob)) {
            throw std::invalid_argument("make_dist: negative or non-finite probability");
        }
        total += prob;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("make_dist: probabilities sum to " + std::to_string(total));
    }

    std::sort(atoms.begin(), atoms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    FiniteDist d;
    for (const auto& [value, prob] : atoms) {
        if (prob == 0.0) {
            continue;
        }
        if (!d.support_.empty() && d.support_.back() == value) {
            d.probs_.back() += prob;
        } else {
            d.support_.push_back(value);
            d.probs_.push_back(prob);
        }
    }
    for (double& p : d.probs_) {
        p /= total;
    }

    d.suffix_.assign(d.support_.size() + 1, 0.0);
    for (std::size_t i = d.support_.size(); i-- > 0;) {
        d.suffix_[i] = d.suffix_[i + 1] + d.probs_[i];
    }
    return d;
}

std::size_t FiniteDist::first_above(double x) const {
    return static_cast<std::size_t>(std::upper_bound(support_.begin(), support_.end(), x) -
                                    support_.begin());
}

double FiniteDist::tail_above(double x) const {
    return suffix_[first_above(x)];
}

double FiniteDist::tail_at_least(double x) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), x);
    return suffix_[static_cast<std::size_t>(it - support_.begin())];
}

double FiniteDist::sample(RandomSource& rng) const {
    return sample_above(-std::numeric_limits<double>::infinity(), rng);
}

double FiniteDist::sample_above(double x, RandomSource& rng) const {
    const std::size_t first = first_above(x);
    const double tail = suffix_[first];
    if (!(tail > 0.0)) {
        throw std::invalid_argument("sample_above: conditioning event has no mass");
    }
    // r is uniform on (0, tail]; pick the last index j >= first whose suffix
    // sum still covers r. Atom j is then chosen with probability p_j / tail.
    const double r = tail - rng.uniform() * tail;
    std::size_t lo = first;
    std::size_t hi = support_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo + 1) / 2;
        if (suffix_[mid] >= r) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return support_[lo];
}

Moments moments(const FiniteDist& d) {
    Moments m;
    const auto xs = d.support();
    const auto ps = d.probs();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        m.mean += ps[i] * xs[i];
        m.second_moment += ps[i] * xs[i] * xs[i];
    }
    // Centered sum avoids the cancellation in E[X^2] - mu^2.
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = xs[i] - m.mean;
        m.variance += ps[i] * c * c;
    }
    return m;
}

double quantile(const FiniteDist& d, double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("quantile: p must lie in (0, 1]");
    }
    const auto xs = d.support();
    const auto ps = d.probs();
    double tail = 0.0;
    for (std::size_t i = xs.size(); i-- > 0;) {
        tail += ps[i];
        if (tail >= p - kProbTolerance) {
            return xs[i];
        }
    }
    return xs.front();
}

double truncated_mean(const FiniteDist& d, double a, double b) {
    if (!(a < b)) {
        throw std::invalid_argument("truncated_mean: requires a < b");
    }
    const auto xs = d.support();
    const auto ps = d.probs();
    double sum = 0.0;
    for (std::size_t i = d.first_above(a); i < xs.size() && xs[i] <= b; ++i) {
        sum += xs[i] * ps[i];
    }
    return sum;
}

std::pair<FiniteDist, FiniteDist> shift_split(const FiniteDist& d, double eta) {
    const auto xs = d.support();
    const auto ps = d.probs();
    std::vector<std::pair<double, double>> plus;
    std::vector<std::pair<double, double>> minus;
    plus.reserve(xs.size());
    minus.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double c = xs[i] - eta;
        plus.emplace_back(c > 0.0 ? c : 0.0, ps[i]);
        minus.emplace_back(c < 0.0 ? -c : 0.0, ps[i]);
    }
    return {FiniteDist::from_atoms(std::move(plus)), FiniteDist::from_atoms(std::move(minus))};
}

FiniteDist pair_square_diff(const FiniteDist& d) {
    const auto xs = d.support();
    const auto ps = d.probs();
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(xs.size() * (xs.size() - 1) / 2 + 1);
    double diagonal = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        diagonal += ps[i] * ps[i];
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const double diff = xs[i] - xs[j];
            atoms.emplace_back(0.5 * diff * diff, 2.0 * ps[i] * ps[j]);
        }
    }
    atoms.emplace_back(0.0, diagonal);
    return FiniteDist::from_atoms(std::move(atoms));
}

ConditionalDist conditional_above(const FiniteDist& d, double x) {
    const auto xs = d.support();
    const auto ps = d.probs();
    const std::size_t first = d.first_above(x);
    ConditionalDist out;
    out.tail = d.tail_above(x);
    if (first == xs.size() || !(out.tail > 0.0)) {
        out.tail = 0.0;
        return out;
    }
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(xs.size() - first);
    for (std::size_t i = first; i < xs.size(); ++i) {
        atoms.emplace_back(xs[i], ps[i] / out.tail);
    }
    out.dist = FiniteDist::from_atoms(std::move(atoms));
    return out;
}

FiniteDist scale_shift(const FiniteDist& d, double scale, double shift) {
    if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(shift)) {
        throw std::invalid_argument("scale_shift: scale must be finite and non-zero");
    }
    const auto xs = d.support();
    const auto ps = d.probs();
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        atoms.emplace_back(scale * xs[i] + shift, ps[i]);
    }
    return FiniteDist::from_atoms(std::move(atoms));
}

std::pair<FiniteDist, FiniteDist> hard_instance_subgaussian(double m, double sigma) {
    if (!(m > 1.0) || !std::isfinite(m)) {
        throw std::invalid_argument("hard_instance_subgaussian: requires m > 1");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("hard_instance_subgaussian: requires sigma > 0");
    }
    const double atom = 1.0 / (m * m);
    const double b = m / std::sqrt(1.0 - atom) * sigma;
    return {FiniteDist::from_atoms({{0.0, 1.0 - atom}, {b, atom}}),
            FiniteDist::from_atoms({{-b, atom}, {0.0, 1.0 - atom}})};
}

StateBasedInstance hard_instance_statebased(double m, double sigma) {
    if (!(m > 1.0) || !std::isfinite(m)) {
        throw std::invalid_argument("hard_instance_statebased: requires m > 1");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("hard_instance_statebased: requires sigma > 0");
    }
    StateBasedInstance out{FiniteDist::point(0.0), FiniteDist::point(0.0), 0.0, 0.0};
    out.alpha = 2.0 * std::log1p(std::sqrt(1.0 - 1.0 / m));
    out.b = m / std::sqrt(m - 1.0) * sigma;
    const double p0b = std::exp(out.alpha) / m;
    if (!(p0b < 1.0)) {
        throw std::invalid_argument("hard_instance_statebased: e^alpha / m must be below 1");
    }
    const double p1b = 1.0 / m;
    out.p0 = FiniteDist::from_atoms({{0.0, 1.0 - p0b}, {out.b, p0b}});
    out.p1 = FiniteDist::from_atoms({{0.0, 1.0 - p1b}, {out.b, p1b}});
    return out;
}

}  // namespace qmean
