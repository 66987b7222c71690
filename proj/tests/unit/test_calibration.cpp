#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "qmean/calibration.hpp"
#include "qmean/constant_profile.hpp"

namespace qmean {
namespace {

TEST(Calibration, DeterministicForSeed) {
    const std::vector<double> grid = {0.01, 0.3};
    RandomSource a(9);
    RandomSource b(9);
    const CalibrationRun ra = run_calibration(grid, 2000, a);
    const CalibrationRun rb = run_calibration(grid, 2000, b);
    ASSERT_EQ(ra.points.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(ra.points[i].mean_oracle, rb.points[i].mean_oracle);
        EXPECT_EQ(ra.points[i].q78_rel_error, rb.points[i].q78_rel_error);
        EXPECT_EQ(ra.points[i].trials, 2000u);
    }
}

TEST(Calibration, PointStatisticsAreConsistent) {
    const std::vector<double> grid = {0.04};
    RandomSource rng(10);
    const CalibrationPoint pt = run_calibration(grid, 5000, rng).points.front();
    // A round with n iterations costs 3n + 1 applications but 4n + 3 oracle
    // experiments (2n + 1 amplitude-oracle calls at two experiments each, plus
    // the round measurement); one more experiment samples on success.
    EXPECT_GT(pt.mean_oracle, pt.mean_aa);
    EXPECT_LE(pt.p10_oracle, pt.mean_oracle);
    EXPECT_GE(pt.mean_aa_sq, pt.mean_aa * pt.mean_aa);
    EXPECT_GE(pt.mean_inv_aa, 1.0 / pt.mean_aa);  // Jensen
    EXPECT_GE(pt.max_rounds, 1u);
}

TEST(Calibration, ProfileReduction) {
    const std::vector<double> grid = {0.01, 0.1};
    RandomSource rng(11);
    const CalibrationRun run = run_calibration(grid, 2000, rng);
    const ConstantProfile p = profile_from_run(run, ProfileMode::calibrated);
    double c1 = 0.0;
    double cps = 0.0;
    for (const CalibrationPoint& pt : run.points) {
        c1 = std::max(c1, std::sqrt(pt.q) * pt.mean_oracle);
        cps = std::max(cps, pt.q * pt.mean_aa_sq);
    }
    EXPECT_EQ(p.c1, c1);
    EXPECT_EQ(p.c_prime_seq, cps);
    EXPECT_EQ(p.d, kCalibratedD);
    EXPECT_NEAR(p.c, p.c0 * p.c0 / (p.c1 * p.c1 * std::sqrt(191.0)), 1e-15);
    EXPECT_NEAR(p.c_prime, 190.0 * p.c1, 1e-9);
    EXPECT_NEAR(p.c1_alg3, 16.0 * p.c_prime_seq * std::sqrt(1.0 + p.c_seq), 1e-9);
    EXPECT_NEAR(p.c2_alg3, 4.0 * (1.0 + p.c_seq) / std::sqrt(1.0 - p.c_seq), 1e-9);

    const ConstantProfile t = profile_from_run(run, ProfileMode::theoretical);
    EXPECT_NEAR(t.d, 600.0 / std::sqrt(t.c), 1e-9);
    EXPECT_EQ(t.c1, p.c1);
}

TEST(Calibration, RejectsBadInput) {
    RandomSource rng(12);
    const std::vector<double> grid = {0.1};
    const std::vector<double> empty;
    const std::vector<double> bad = {0.0};
    EXPECT_THROW(run_calibration(grid, 999, rng), std::invalid_argument);
    EXPECT_THROW(run_calibration(empty, 1000, rng), std::invalid_argument);
    EXPECT_THROW(run_calibration(bad, 1000, rng), std::invalid_argument);
}

TEST(Calibration, BuiltinProfileIsStable) {
    const ConstantProfile& p = calibrated_profile();
    EXPECT_NO_THROW(validate(p));
    EXPECT_EQ(builtin_calibration().points.size(), builtin_calibration_grid().size());
    EXPECT_NEAR(p.c1, 13.364, 0.01 * 13.364);
    EXPECT_NEAR(p.c0, 1.6444, 0.01 * 1.6444);
    EXPECT_LT(p.c_seq, 1.0);
    EXPECT_EQ(theoretical_profile().c1, p.c1);
    EXPECT_EQ(theoretical_profile().d, theoretical_d(p.c));
}

TEST(ConstantProfile, JsonRoundTrip) {
    const ConstantProfile& p = calibrated_profile();
    EXPECT_EQ(profile_from_json(profile_to_json(p)), p);
    EXPECT_EQ(profile_from_json(profile_to_json(theoretical_profile())), theoretical_profile());

    const std::string path = ::testing::TempDir() + "qmean_profile.json";
    {
        std::ofstream out(path);
        out << profile_to_json(p);
    }
    EXPECT_EQ(load_profile(path), p);
    std::remove(path.c_str());
    EXPECT_EQ(load_profile("calibrated"), p);
    EXPECT_THROW(load_profile("no-such-profile.json"), std::invalid_argument);
}

TEST(ConstantProfile, ValidationRejectsBrokenProfiles) {
    ConstantProfile p = calibrated_profile();
    p.c0 = p.c1;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = calibrated_profile();
    p.c_seq = 1.0;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = calibrated_profile();
    p.d = -1.0;
    EXPECT_THROW(validate(p), std::invalid_argument);
    p = calibrated_profile();
    p.c_prime = std::nan("");
    EXPECT_THROW(validate(p), std::invalid_argument);

    std::string text = profile_to_json(calibrated_profile());
    text.insert(1, "\"extra\": 1, ");
    EXPECT_THROW(profile_from_json(text), std::invalid_argument);
}

}  // namespace
}  // namespace qmean
