#include "qmean/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qmean/amplitude.hpp"

namespace qmean {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Runs each stage on a child counter, merges it back and, when a report is
// attached, books the stage's oracle cost under its name.
class StageRunner {
   public:
    StageRunner(ExperimentCounter& counter, EstimateReport* report)
        : counter_(counter), report_(report) {}

    template <class F>
    auto run(const std::string& name, std::optional<std::uint64_t> local_budget, F&& body) {
        ExperimentCounter child = counter_.child(local_budget);
        auto result = body(child);
        counter_.absorb(child);
        if (report_ != nullptr) {
            record(name, child);
        }
        return result;
    }

   private:
    void record(const std::string& name, const ExperimentCounter& child) {
        auto& costs = report_->stage_costs;
        auto it = std::find_if(costs.begin(), costs.end(),
                               [&](const auto& entry) { return entry.first == name; });
        if (it == costs.end()) {
            costs.emplace_back(name, child.oracle_experiments());
        } else {
            it->second += child.oracle_experiments();
        }
        auto& flagged = report_->interrupted_stages;
        if (child.interrupted() && std::find(flagged.begin(), flagged.end(), name) == flagged.end()) {
            flagged.push_back(name);
        }
    }

    ExperimentCounter& counter_;
    EstimateReport* report_;
};

EstimateReport& finish(EstimateReport& report, const ExperimentCounter& root) {
    report.oracle_experiments = root.oracle_experiments();
    report.aa_applications = root.aa_applications();
    report.interrupted = root.interrupted();
    return report;
}

void check_unit_interval(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in (0, 1)");
    }
}

void check_in_unit_range(const FiniteDist& d, const char* who) {
    if (d.min() < 0.0 || d.max() > 1.0) {
        throw std::invalid_argument(std::string(who) + ": support must lie in [0, 1]");
    }
}

std::uint64_t ceil_u64(double x) {
    return static_cast<std::uint64_t>(std::ceil(x));
}

double quantile_core(const QVar& X, double p, double delta, const ConstantProfile& profile,
                     RandomSource& rng, StageRunner& stages) {
    check_unit_interval(p, "quantile_est: p");
    check_unit_interval(delta, "quantile_est: delta");
    const auto reps = ceil_u64(6.0 * log_inv(delta, profile.log_base));
    const std::uint64_t cap = ceil_u64(profile.c_prime / std::sqrt(p));

    std::vector<double> ends;
    ends.reserve(reps);
    for (std::uint64_t i = 0; i < reps; ++i) {
        ends.push_back(stages.run("rep" + std::to_string(i + 1), cap, [&](ExperimentCounter& c) {
            double y = kNegInf;
            while (true) {
                const CondSample s = cond_sample_above(X, y, rng, c);
                if (!s.y) {
                    return y;
                }
                y = *s.y;
            }
        }));
    }
    return lower_median(std::move(ends));
}

double bern_core(const QVar& X, double n, double a, double b, double delta, LogBase base,
                 RandomSource& rng, ExperimentCounter& counter) {
    check_unit_interval(delta, "bern_est: delta");
    if (!(a >= 0.0) || !(b >= a) || !std::isfinite(b)) {
        throw std::invalid_argument("bern_est: requires 0 <= a <= b");
    }
    double amplitude = 0.0;
    if (a < b) {
        amplitude = std::clamp(truncated_mean(X.dist, a, b) / b, 0.0, 1.0);
    }
    return b * aest_median(amplitude, n, delta, rng, counter, X.per_application(), base,
                           X.costs.measure);
}

SeqAestResult seq_bern_core(const QVar& X, RandomSource& rng, ExperimentCounter& counter) {
    check_in_unit_range(X.dist, "seq_bern_est");
    const double mu = std::clamp(moments(X.dist).mean, 0.0, 1.0);
    return seq_aest(mu, rng, counter, X.per_application(), X.costs.measure);
}

double subgauss_core(const QVar& X, double n, double delta, const ConstantProfile& profile,
                     RandomSource& rng, StageRunner& stages) {
    const SubgaussShape shape = subgauss_shape(n, delta, profile);

    const double eta = stages.run("classical_median", std::nullopt, [&](ExperimentCounter& c) {
        std::vector<double> samples;
        samples.reserve(shape.classical_samples);
        for (std::uint64_t i = 0; i < shape.classical_samples; ++i) {
            c.charge_oracle(X.classical_sample_cost());
            samples.push_back(X.dist.sample(rng));
        }
        return lower_median(std::move(samples));
    });

    const auto [plus, minus] = shift_split(X.dist, eta);
    const double N = static_cast<double>(shape.n);
    const double layer_delta = delta / (9.0 * static_cast<double>(shape.k));

    const auto side = [&](const FiniteDist& dist, const std::string& tag) {
        const QVar Y(dist, X.costs);
        double q = stages.run("quantile[" + tag + "]", std::nullopt, [&](ExperimentCounter& c) {
            StageRunner inner(c, nullptr);
            return quantile_core(Y, shape.quantile_p, delta / 8.0, profile, rng, inner);
        });
        if (!std::isfinite(q)) {
            q = 0.0;
        }
        return stages.run("layers[" + tag + "]", std::nullopt, [&](ExperimentCounter& c) {
            double sum = 0.0;
            for (std::uint64_t l = 0; l <= shape.k; ++l) {
                const int li = static_cast<int>(l);
                const double lo = l == 0 ? 0.0 : std::ldexp(q, li - 1) / N;
                const double hi = std::ldexp(q, li) / N;
                sum += bern_core(Y, shape.m, lo, hi, layer_delta, profile.log_base, rng, c);
            }
            return sum;
        });
    };

    const double mu_plus = side(plus, "Y+");
    const double mu_minus = side(minus, "Y-");
    return eta + mu_plus - mu_minus;
}

}  // namespace

std::uint64_t EstimateReport::stage_cost(const std::string& name) const {
    for (const auto& [stage, cost] : stage_costs) {
        if (stage == name) {
            return cost;
        }
    }
    return 0;
}

double lower_median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("lower_median: empty input");
    }
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

CondSample cond_sample_above(const QVar& X, double x, RandomSource& rng, ExperimentCounter& counter) {
    const std::uint64_t before = counter.oracle_experiments();
    const double q = X.dist.tail_above(x);
    CondSample out;
    const SeqAampResult run =
        seq_aamp(std::min(q, 1.0), rng, counter, X.per_application(), X.costs.measure);
    if (run.succeeded) {
        const std::uint64_t due = X.costs.measure;
        if (counter.charge_oracle(due) == due) {
            out.y = X.dist.sample_above(x, rng);
        }
    }
    out.T_oracle = counter.oracle_experiments() - before;
    return out;
}

EstimateReport quantile_est(const QVar& X, double p, double delta, const ConstantProfile& profile,
                            RandomSource& rng, std::optional<std::uint64_t> budget) {
    ExperimentCounter root(budget);
    EstimateReport report;
    StageRunner stages(root, &report);
    report.estimate = quantile_core(X, p, delta, profile, rng, stages);
    return finish(report, root);
}

EstimateReport bern_est(const QVar& X, double n, double a, double b, double delta,
                        RandomSource& rng, LogBase base, std::optional<std::uint64_t> budget) {
    ExperimentCounter root(budget);
    EstimateReport report;
    StageRunner stages(root, &report);
    report.estimate = stages.run("aest_median", std::nullopt, [&](ExperimentCounter& c) {
        return bern_core(X, n, a, b, delta, base, rng, c);
    });
    return finish(report, root);
}

SubgaussShape subgauss_shape(double n, double delta, const ConstantProfile& profile) {
    check_unit_interval(delta, "subgauss_est: delta");
    const double L = log_inv(delta, profile.log_base);
    if (!(n >= L) || !std::isfinite(n)) {
        throw std::invalid_argument("subgauss_est: requires n >= log(1/delta)");
    }
    if (n > 0x1.0p40) {
        throw std::invalid_argument("subgauss_est: n too large");
    }
    SubgaussShape s;
    s.n = 2;
    s.k = 1;
    while (static_cast<double>(s.n) < n) {
        s.n *= 2;
        ++s.k;
    }
    const double k = static_cast<double>(s.k);
    s.m = profile.d * static_cast<double>(s.n) * std::sqrt(k) *
          log_inv(delta / (9.0 * k), profile.log_base) / L;
    s.classical_samples = ceil_u64(30.0 * log_inv(delta / 2.0, profile.log_base));
    const double r = L / (6.0 * static_cast<double>(s.n));
    s.quantile_p = r * r;
    return s;
}

EstimateReport subgauss_est(const QVar& X, double n, double delta, const ConstantProfile& profile,
                            RandomSource& rng, std::optional<std::uint64_t> budget) {
    ExperimentCounter root(budget);
    EstimateReport report;
    StageRunner stages(root, &report);
    report.estimate = subgauss_core(X, n, delta, profile, rng, stages);
    return finish(report, root);
}

EstimateReport relative_est(const QVar& X, double ch, double epsilon, double delta,
                            const ConstantProfile& profile, RandomSource& rng,
                            std::optional<std::uint64_t> budget) {
    if (!(ch > 0.0) || !std::isfinite(ch)) {
        throw std::invalid_argument("relative_est: ch must be positive");
    }
    check_unit_interval(epsilon, "relative_est: epsilon");
    check_unit_interval(delta, "relative_est: delta");
    const double n = ch / epsilon * log_inv(delta, profile.log_base);
    return subgauss_est(X, n, delta, profile, rng, budget);
}

EstimateReport seq_bern_est(const QVar& X, RandomSource& rng, std::optional<std::uint64_t> budget) {
    ExperimentCounter root(budget);
    EstimateReport report;
    StageRunner stages(root, &report);
    report.estimate = stages.run("seq_aest", std::nullopt, [&](ExperimentCounter& c) {
        return seq_bern_core(X, rng, c).p_estimate;
    });
    return finish(report, root);
}

EstimateReport seq_relative_est(const QVar& X, double epsilon, double delta,
                                const ConstantProfile& profile, RandomSource& rng,
                                std::optional<std::uint64_t> budget) {
    check_unit_interval(epsilon, "seq_relative_est: epsilon");
    check_unit_interval(delta, "seq_relative_est: delta");
    check_in_unit_range(X.dist, "seq_relative_est");

    constexpr double kInnerDelta = 1.0 / 16.0;
    const auto reps = ceil_u64(32.0 * log_inv(delta, profile.log_base));
    const QVar Y(pair_square_diff(X.dist), X.costs);
    const double min_n = log_inv(kInnerDelta, profile.log_base);

    ExperimentCounter root(budget);
    EstimateReport report;
    StageRunner stages(root, &report);
    std::vector<double> outputs;
    outputs.reserve(reps);
    for (std::uint64_t i = 0; i < reps; ++i) {
        const double mu_x = stages.run("seq_bern_x", std::nullopt, [&](ExperimentCounter& c) {
            return seq_bern_core(X, rng, c).p_estimate;
        });
        if (mu_x == 0.0) {
            outputs.push_back(0.0);
            continue;
        }
        const double scale = epsilon * mu_x;
        const std::uint64_t stop = ceil_u64(profile.c1_alg3 / std::sqrt(scale));
        const double mu_y = stages.run("seq_bern_y", stop, [&](ExperimentCounter& c) {
            const SeqAestResult r = seq_bern_core(Y, rng, c);
            return r.interrupted ? 0.0 : r.p_estimate;
        });
        const double n = std::max(
            profile.c2_alg3 * std::max(std::sqrt(mu_y) / scale, 1.0 / std::sqrt(scale)), min_n);
        outputs.push_back(stages.run("subgauss", std::nullopt, [&](ExperimentCounter& c) {
            StageRunner inner(c, nullptr);
            return subgauss_core(X, n, kInnerDelta, profile, rng, inner);
        }));
    }
    report.estimate = lower_median(std::move(outputs));
    return finish(report, root);
}

}  // namespace qmean
