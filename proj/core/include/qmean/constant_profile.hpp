#pragma once

#include <string>
#include <string_view>

#include "qmean/log_base.hpp"

namespace qmean {

enum class ProfileMode { theoretical, calibrated };

/// The universal constants the estimators are parameterized by.
///
///   c0, c1          conditional sampler: Pr[T < c0/sqrt(q)] <= 1/10 and
///                   E[T] <= c1/sqrt(q)
///   c, c_prime      quantile estimation: output in [Q(p), Q(c p)],
///                   per-repetition interrupt at c_prime/sqrt(p)
///   d               sub-Gaussian layer time parameter
///   c1_alg3, c2_alg3  sequential relative estimator stop rule and time
///   c_seq, c_prime_seq, c_dprime_seq  sequential Bernoulli estimator:
///                   relative error, E[1/mu~] <= c'/mu, E[sqrt(mu~)] <= c'' sqrt(mu)
struct ConstantProfile {
    double c0 = 0.0;
    double c1 = 0.0;
    double c = 0.0;
    double c_prime = 0.0;
    double d = 0.0;
    double c1_alg3 = 0.0;
    double c2_alg3 = 0.0;
    double c_seq = 0.0;
    double c_prime_seq = 0.0;
    double c_dprime_seq = 0.0;
    LogBase log_base = LogBase::natural;
    ProfileMode mode = ProfileMode::calibrated;

    bool operator==(const ConstantProfile&) const = default;
};

/// Fills c, c_prime, c1_alg3 and c2_alg3 from the measured constants:
/// c = c0^2 / (c1^2 sqrt(191)), c_prime = 190 c1,
/// c1_alg3 = 16 c_prime_seq sqrt(1 + c_seq), c2_alg3 = 4 (1 + c_seq) / sqrt(1 - c_seq).
void apply_couplings(ConstantProfile& profile);

/// d = 600 / sqrt(c), the value the sub-Gaussian analysis asks for.
double theoretical_d(double c);

/// Layer time constant used by the calibrated profile. The theoretical d
/// makes the layer estimators run for ~1e4 n steps, far past desk scale.
inline constexpr double kCalibratedD = 2.0;

/// Throws std::invalid_argument if any constant is non-positive or
/// non-finite, c >= 1, c0 >= c1, or c_seq >= 1.
void validate(const ConstantProfile& profile);

/// Profiles built from the built-in calibration run (computed once per
/// process, deterministic).
const ConstantProfile& theoretical_profile();
const ConstantProfile& calibrated_profile();

std::string profile_to_json(const ConstantProfile& profile);

/// Parses the JSON written by profile_to_json. Unknown keys are rejected.
ConstantProfile profile_from_json(std::string_view text);

/// "theoretical", "calibrated", or a path to a profile JSON file.
ConstantProfile load_profile(std::string_view designator);

std::string_view to_string(ProfileMode mode);

}  // namespace qmean
