#include "qmean/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qmean/amplitude.hpp"
#include "qmean/experiment_counter.hpp"

namespace qmean {

namespace {

// Conditional sampler footprint: V = C(U x I) costs two oracle experiments.
constexpr std::uint64_t kSamplerPerApp = 2;

double order_stat(std::vector<double>& xs, double fraction) {
    const auto idx = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(xs.size() - 1)));
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(idx), xs.end());
    return xs[idx];
}

}  // namespace

CalibrationRun run_calibration(std::span<const double> grid, std::uint64_t trials,
                               RandomSource& rng) {
    if (trials < 1000) {
        throw std::invalid_argument("calibrate: trials must be at least 1000");
    }
    if (grid.empty()) {
        throw std::invalid_argument("calibrate: empty grid");
    }
    CalibrationRun run;
    for (double q : grid) {
        if (!(q > 0.0 && q <= 1.0)) {
            throw std::invalid_argument("calibrate: grid amplitudes must lie in (0, 1]");
        }
        CalibrationPoint pt;
        pt.q = q;
        pt.trials = trials;
        std::vector<double> oracle(trials);
        std::vector<double> rel(trials);
        for (std::uint64_t t = 0; t < trials; ++t) {
            ExperimentCounter counter;
            const SeqAampResult r = seq_aamp(q, rng, counter, kSamplerPerApp);
            // The sampler measures once more to read the conditioned value.
            oracle[t] = static_cast<double>(counter.oracle_experiments() + 1);
            const double T = static_cast<double>(r.T);
            pt.mean_oracle += oracle[t];
            pt.mean_aa += T;
            pt.mean_aa_sq += T * T;
            pt.mean_inv_aa += 1.0 / T;
            rel[t] = std::abs(1.0 / (T * T) - q) / q;
            pt.max_rounds = std::max(pt.max_rounds, r.rounds);
        }
        const double n = static_cast<double>(trials);
        pt.mean_oracle /= n;
        pt.mean_aa /= n;
        pt.mean_aa_sq /= n;
        pt.mean_inv_aa /= n;
        pt.p10_oracle = order_stat(oracle, 0.1);
        pt.q78_rel_error = order_stat(rel, 0.875);
        run.points.push_back(pt);
    }
    return run;
}

ConstantProfile profile_from_run(const CalibrationRun& run, ProfileMode mode, LogBase base) {
    if (run.points.empty()) {
        throw std::invalid_argument("calibrate: empty grid");
    }
    ConstantProfile prof;
    prof.c0 = std::numeric_limits<double>::infinity();
    for (const CalibrationPoint& pt : run.points) {
        const double sq = std::sqrt(pt.q);
        prof.c1 = std::max(prof.c1, sq * pt.mean_oracle);
        prof.c0 = std::min(prof.c0, sq * pt.p10_oracle);
        prof.c_prime_seq = std::max(prof.c_prime_seq, pt.q * pt.mean_aa_sq);
        prof.c_dprime_seq = std::max(prof.c_dprime_seq, pt.mean_inv_aa / sq);
        prof.c_seq = std::max(prof.c_seq, pt.q78_rel_error);
    }
    if (!(prof.c0 < prof.c1)) {
        throw std::invalid_argument("calibrate: degenerate grid (c0 >= c1)");
    }
    if (!(prof.c_seq < 1.0)) {
        throw std::invalid_argument("calibrate: degenerate grid (c_seq >= 1)");
    }
    prof.log_base = base;
    prof.mode = mode;
    apply_couplings(prof);
    prof.d = mode == ProfileMode::calibrated ? kCalibratedD : theoretical_d(prof.c);
    validate(prof);
    return prof;
}

ConstantProfile calibrate_constants(std::span<const double> grid, std::uint64_t trials,
                                    RandomSource& rng) {
    return profile_from_run(run_calibration(grid, trials, rng), ProfileMode::calibrated);
}

std::vector<double> builtin_calibration_grid() {
    return {1e-4, 1e-3, 1e-2, 0.1, 0.5};
}

const CalibrationRun& builtin_calibration() {
    static const CalibrationRun run = [] {
        RandomSource rng(kBuiltinCalibrationSeed);
        const auto grid = builtin_calibration_grid();
        return run_calibration(grid, kBuiltinCalibrationTrials, rng);
    }();
    return run;
}

}  // namespace qmean
