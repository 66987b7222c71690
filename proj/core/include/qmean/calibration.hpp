#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qmean/constant_profile.hpp"
#include "qmean/random_source.hpp"

namespace qmean {

/// Monte Carlo statistics of the sequential amplifier at one amplitude q,
/// run with the conditional sampler's cost weights (two oracle experiments per
/// application, one measurement per round, one extra measurement on success).
struct CalibrationPoint {
    double q = 0.0;
    std::uint64_t trials = 0;
    double mean_oracle = 0.0;       // E[T] in oracle experiments
    double p10_oracle = 0.0;        // 10th percentile of T in oracle experiments
    double mean_aa = 0.0;           // E[T] in AA applications
    double mean_aa_sq = 0.0;        // E[T^2] in AA applications
    double mean_inv_aa = 0.0;       // E[1/T] in AA applications
    double q78_rel_error = 0.0;     // 7/8-quantile of |1/T^2 - q| / q
    std::uint64_t max_rounds = 0;
};

struct CalibrationRun {
    std::vector<CalibrationPoint> points;
};

/// Runs `trials` sequential amplification runs at each q in the grid.
/// Throws std::invalid_argument when trials < 1000, the grid is empty, or a q
/// lies outside (0, 1].
CalibrationRun run_calibration(std::span<const double> grid, std::uint64_t trials,
                               RandomSource& rng);

/// Reduces a run to a profile: c1 = max sqrt(q) E[T], c0 = min sqrt(q) P10(T),
/// c_prime_seq = max q E[T^2], c_dprime_seq = max E[1/T] / sqrt(q),
/// c_seq = max 7/8-quantile relative error; the remaining constants follow
/// from the couplings. `mode` selects d (calibrated: kCalibratedD,
/// theoretical: 600/sqrt(c)).
ConstantProfile profile_from_run(const CalibrationRun& run, ProfileMode mode,
                                 LogBase base = LogBase::natural);

/// run_calibration followed by profile_from_run in calibrated mode.
/// Throws std::invalid_argument on a degenerate grid (c0 >= c1 or c_seq >= 1).
ConstantProfile calibrate_constants(std::span<const double> grid, std::uint64_t trials,
                                    RandomSource& rng);

/// Grid, trial count and seed of the built-in calibration.
std::vector<double> builtin_calibration_grid();
inline constexpr std::uint64_t kBuiltinCalibrationTrials = 20000;
inline constexpr std::uint64_t kBuiltinCalibrationSeed = 0x5eed2024;

/// The built-in run, computed on first use and cached.
const CalibrationRun& builtin_calibration();

}  // namespace qmean
