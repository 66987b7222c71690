#include "qmean/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qmean {

namespace {

constexpr double kGrowth = 1.1;
// Offsets closer than this to an integer are treated as that integer, where
// the Fejer kernel is 0/0 and is taken by continuity.
constexpr double kSnap = 1e-9;

void check_amplitude(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("amplitude must lie in [0, 1]");
    }
}

// Fejer kernel in grid units, periodic with period M.
double fejer(double d, std::uint64_t M) {
    const double Md = static_cast<double>(M);
    const double r = std::round(d);
    if (std::abs(d - r) < kSnap) {
        const double k = std::fmod(r, Md);
        return k == 0.0 ? 1.0 : 0.0;
    }
    const double num = std::sin(std::numbers::pi * d);
    const double den = Md * std::sin(std::numbers::pi * d / Md);
    return (num * num) / (den * den);
}

std::uint64_t wrap(double i, std::uint64_t M) {
    const double Md = static_cast<double>(M);
    double r = std::fmod(i, Md);
    if (r < 0.0) {
        r += Md;
    }
    return static_cast<std::uint64_t>(r) % M;
}

// Iteration-count range of every round until 1.1^l exceeds 2^62.
const std::vector<std::pair<std::uint64_t, std::uint64_t>>& round_schedule() {
    static const auto schedule = [] {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> rounds;
        for (std::uint64_t l = 1;; ++l) {
            const double hi_real = std::pow(kGrowth, static_cast<double>(l));
            if (hi_real > 0x1.0p62) {
                return rounds;
            }
            const auto lo = static_cast<std::uint64_t>(
                std::ceil(std::pow(kGrowth, static_cast<double>(l) - 1.0)));
            rounds.emplace_back(lo, std::max(lo, static_cast<std::uint64_t>(std::ceil(hi_real)) - 1));
        }
    }();
    return schedule;
}

}  // namespace

double grover_angle(double p) {
    check_amplitude(p);
    return std::asin(std::sqrt(p));
}

double aamp_success_prob(double p, std::uint64_t n) {
    const double s = std::sin((2.0 * static_cast<double>(n) + 1.0) * grover_angle(p));
    return s * s;
}

SeqAampResult seq_aamp(double p, RandomSource& rng, ExperimentCounter& counter,
                       std::uint64_t per_app_oracle_cost, std::uint64_t measure_cost) {
    check_amplitude(p);
    if (p == 0.0 && !counter.budget()) {
        throw std::invalid_argument("seq_aamp: p = 0 needs a budget to terminate");
    }
    const double theta = grover_angle(p);
    SeqAampResult out;
    const auto& schedule = round_schedule();
    for (std::uint64_t l = 1;; ++l) {
        if (l > schedule.size()) {
            throw std::overflow_error("seq_aamp: iteration count overflow");
        }
        const auto [lo, hi] = schedule[l - 1];
        const std::uint64_t n = rng.uniform_int(lo, hi);
        out.rounds = l;

        const std::uint64_t apps = 2 * n + 1;
        const std::uint64_t due = apps * per_app_oracle_cost + measure_cost;
        const std::uint64_t charged = counter.charge_oracle(due);
        if (charged < due) {
            // Partial round: credit the composite applications that fit, with
            // the reflections interleaved between them.
            const std::uint64_t k =
                per_app_oracle_cost == 0 ? apps : std::min(apps, charged / per_app_oracle_cost);
            const std::uint64_t aa = k + std::min(n, k / 2);
            counter.charge_aa(aa);
            out.T += aa;
            return out;
        }
        counter.charge_aa(3 * n + 1);
        out.T += 3 * n + 1;

        const double s = std::sin(static_cast<double>(apps) * theta);
        if (rng.bernoulli(s * s)) {
            out.succeeded = true;
            return out;
        }
    }
}

std::vector<double> ae_outcome_dist(double p, std::uint64_t M) {
    check_amplitude(p);
    if (M < 1) {
        throw std::invalid_argument("ae_outcome_dist: M must be at least 1");
    }
    const double shift = static_cast<double>(M) * grover_angle(p) / std::numbers::pi;
    std::vector<double> probs(M);
    for (std::uint64_t y = 0; y < M; ++y) {
        const double yd = static_cast<double>(y);
        if (p == 0.0 || p == 1.0) {
            probs[y] = fejer(yd - shift, M);
        } else {
            probs[y] = 0.5 * fejer(yd - shift, M) + 0.5 * fejer(yd + shift, M);
        }
    }
    return probs;
}

double ae_estimate_from_outcome(std::uint64_t y, std::uint64_t M) {
    if (M < 1 || y >= M) {
        throw std::invalid_argument("ae_estimate_from_outcome: y must lie in [0, M)");
    }
    const std::uint64_t folded = std::min(y, M - y);
    const std::uint64_t g = std::gcd(folded, M);
    const std::uint64_t num = g == 0 ? 0 : folded / g;
    const std::uint64_t den = g == 0 ? 1 : M / g;
    if (num == 0) {
        return 0.0;
    }
    switch (den) {
        case 2: return 1.0;
        case 3: return 0.75;
        case 4: return 0.5;
        case 6: return 0.25;
        default: break;
    }
    const double s =
        std::sin(std::numbers::pi * static_cast<double>(folded) / static_cast<double>(M));
    return s * s;
}

AEOutcome aest_sample(double p, std::uint64_t M, RandomSource& rng, ExperimentCounter& counter,
                      std::uint64_t per_app_oracle_cost, std::uint64_t measure_cost) {
    check_amplitude(p);
    if (M < 1) {
        throw std::invalid_argument("aest_sample: M must be at least 1");
    }
    counter.charge_oracle(M * 2 * per_app_oracle_cost + measure_cost);
    counter.charge_aa(3 * M);

    // Pick one of the two eigenphase branches, then walk outward from its
    // centre accumulating kernel mass until the uniform draw is covered. The
    // kernel's tail beyond distance k is O(1/k), so the walk is O(log M) in
    // expectation; M steps cover a full period.
    const double shift = static_cast<double>(M) * grover_angle(p) / std::numbers::pi;
    const double centre = rng.bernoulli(0.5) ? shift : -shift;
    const double u = rng.uniform();
    const double base = std::floor(centre);
    double acc = 0.0;
    double at = base;
    for (std::uint64_t step = 0; step < M; ++step) {
        const double offset = step % 2 == 0 ? -static_cast<double>(step / 2)
                                            : static_cast<double>(step / 2 + 1);
        at = base + offset;
        acc += fejer(at - centre, M);
        if (acc > u) {
            break;
        }
    }
    AEOutcome out;
    out.y = wrap(at, M);
    out.p_estimate = ae_estimate_from_outcome(out.y, M);
    return out;
}

AestMedianShape aest_median_shape(double n, double delta, LogBase base) {
    const double L = log_inv(delta, base);
    if (!(n >= L) || !std::isfinite(n)) {
        throw std::invalid_argument("aest_median: requires n >= log(1/delta)");
    }
    AestMedianShape shape;
    shape.repetitions = static_cast<std::uint64_t>(std::ceil(6.0 * L));
    shape.M = static_cast<std::uint64_t>(std::ceil(2.0 * std::numbers::pi * n / L));
    return shape;
}

double aest_median(double p, double n, double delta, RandomSource& rng, ExperimentCounter& counter,
                   std::uint64_t per_app_oracle_cost, LogBase base, std::uint64_t measure_cost) {
    const AestMedianShape shape = aest_median_shape(n, delta, base);
    std::vector<double> estimates;
    estimates.reserve(shape.repetitions);
    for (std::uint64_t i = 0; i < shape.repetitions; ++i) {
        estimates.push_back(
            aest_sample(p, shape.M, rng, counter, per_app_oracle_cost, measure_cost).p_estimate);
    }
    const auto mid = estimates.begin() + static_cast<std::ptrdiff_t>((estimates.size() - 1) / 2);
    std::nth_element(estimates.begin(), mid, estimates.end());
    return *mid;
}

SeqAestResult seq_aest(double p, RandomSource& rng, ExperimentCounter& counter,
                       std::uint64_t per_app_oracle_cost, std::uint64_t measure_cost) {
    const SeqAampResult run = seq_aamp(p, rng, counter, per_app_oracle_cost, measure_cost);
    SeqAestResult out;
    out.T = run.T;
    out.interrupted = !run.succeeded;
    if (run.succeeded) {
        const double t = static_cast<double>(run.T);
        out.p_estimate = 1.0 / (t * t);
    }
    return out;
}

}  // namespace qmean
