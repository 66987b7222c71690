// qmean: command-line front end for sweeps, summaries, calibration and checks.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 validation failure.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmean/baselines.hpp"
#include "qmean/calibration.hpp"
#include "qmean/constant_profile.hpp"
#include "qmean/dist_spec.hpp"
#include "qmean/statevector_qpe.hpp"
#include "qmean/summary.hpp"
#include "qmean/sweep.hpp"

namespace {

using namespace qmean;

constexpr int kConfigError = 1;
constexpr int kValidationFailure = 2;

// Writes to the named file, or stdout for "-".
void write_output(const std::string& path, const std::function<void(std::ostream&)>& emit) {
    if (path == "-") {
        emit(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open '" + path + "' for writing");
    }
    emit(out);
    if (!out) {
        throw std::invalid_argument("write to '" + path + "' failed");
    }
}

std::vector<SweepRow> read_rows(const std::string& path) {
    if (path == "-") {
        return read_csv(std::cin);
    }
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    return read_csv(in);
}

int cmd_sweep(const std::string& config_path, const std::string& out_path, unsigned threads) {
    const SweepConfig config = load_sweep_config(config_path);
    const SweepResult result = run_sweep(config, threads);
    for (const SkippedPoint& s : result.skipped) {
        std::fprintf(stderr, "skipped grid point %zu: %s\n", s.grid_index, s.reason.c_str());
    }
    write_output(out_path, [&](std::ostream& out) { write_csv(out, result.rows); });
    return 0;
}

int cmd_summarize(const std::string& in_path, const std::string& bound,
                  const std::string& profile) {
    if (bound != "auto" && bound != "none") {
        throw std::invalid_argument("--bound must be auto or none");
    }
    const auto rows = read_rows(in_path);
    const auto groups = summarize(rows, bound == "auto" ? BoundMode::automatic : BoundMode::none,
                                  load_profile(profile));
    write_summary_tsv(std::cout, groups);
    return 0;
}

int cmd_slope(const std::string& in_path, const std::string& x, const std::string& y,
              double pct) {
    const SlopeFit fit = slope_from_rows(read_rows(in_path), x, y, pct);
    for (const auto& [px, py] : fit.points) {
        std::fprintf(stderr, "%s\t%s\n", format_double(px).c_str(), format_double(py).c_str());
    }
    std::printf("%s\n", format_double(fit.slope).c_str());
    return 0;
}

int cmd_calibrate(std::uint64_t trials, std::uint64_t seed, const std::string& mode,
                  const std::string& log_base, std::vector<double> grid,
                  const std::string& out_path) {
    if (grid.empty()) {
        grid = builtin_calibration_grid();
    }
    ProfileMode profile_mode = ProfileMode::calibrated;
    if (mode == "theoretical") {
        profile_mode = ProfileMode::theoretical;
    } else if (mode != "calibrated") {
        throw std::invalid_argument("--mode must be calibrated or theoretical");
    }
    RandomSource rng(seed);
    const CalibrationRun run = run_calibration(grid, trials, rng);
    const ConstantProfile profile = profile_from_run(run, profile_mode, parse_log_base(log_base));
    write_output(out_path, [&](std::ostream& out) { out << profile_to_json(profile) << '\n'; });
    return 0;
}

int cmd_verify_ae(std::uint64_t max_m) {
    const AeVerification r = verify_ae(max_m);
    std::printf("max_tv\t%s\nworst_M\t%llu\nworst_p\t%s\ncases\t%llu\n",
                format_double(r.max_tv).c_str(), static_cast<unsigned long long>(r.worst_M),
                format_double(r.worst_p).c_str(), static_cast<unsigned long long>(r.cases));
    return r.max_tv <= 1e-9 ? 0 : kValidationFailure;
}

int cmd_bounds(const std::string& instance, const std::string& p0_name,
               const std::string& p1_name, double delta, std::int64_t T) {
    FiniteDist p0 = FiniteDist::point(0.0);
    FiniteDist p1 = FiniteDist::point(0.0);
    if (!instance.empty()) {
        if (!p0_name.empty() || !p1_name.empty()) {
            throw std::invalid_argument("use either --instance or --p0/--p1");
        }
        p0 = resolve_distribution(instance + ":0");
        p1 = resolve_distribution(instance + ":1");
    } else if (!p0_name.empty() && !p1_name.empty()) {
        p0 = resolve_distribution(p0_name);
        p1 = resolve_distribution(p1_name);
    } else {
        throw std::invalid_argument("bounds needs --instance or both --p0 and --p1");
    }
    const BoundReport r = bound_report(p0, p1, delta, T);
    std::printf("kl\t%s\nfidelity\t%s\nT\t%lld\nhelstrom_success\t%s\nt_lower\t%s\n",
                format_double(r.kl).c_str(), format_double(r.fidelity).c_str(),
                static_cast<long long>(r.T), format_double(r.helstrom_success).c_str(),
                r.t_lower ? std::to_string(*r.t_lower).c_str() : "inf");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum mean estimation simulator and experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path = "-";
    unsigned threads = 0;
    auto* sweep = app.add_subcommand("sweep", "Run an estimator sweep and write CSV rows");
    sweep->add_option("--config", config_path, "Sweep configuration (JSON)")->required();
    sweep->add_option("--out", out_path, "Output CSV file, - for stdout");
    sweep->add_option("--threads", threads, "Worker threads, 0 for all cores");

    std::string in_path;
    std::string bound = "auto";
    std::string profile = "calibrated";
    auto* summ = app.add_subcommand("summarize", "Aggregate sweep rows per grid point (TSV)");
    summ->add_option("--in", in_path, "Sweep CSV, - for stdin")->required();
    summ->add_option("--bound", bound, "auto: measure failure rates against each estimator's bound");
    summ->add_option("--profile", profile, "Profile used for bounds: calibrated, theoretical or a file");

    std::string x_col = "oracle_experiments";
    std::string y_col = "abs_error";
    double pct = 90.0;
    auto* slope = app.add_subcommand("slope", "Fit a log-log slope of a y percentile against mean x");
    slope->add_option("--in", in_path, "Sweep CSV, - for stdin")->required();
    slope->add_option("--x", x_col, "Cost column");
    slope->add_option("--y", y_col, "Error column");
    slope->add_option("--percentile", pct, "Percentile of y per grid point");

    std::uint64_t trials = kBuiltinCalibrationTrials;
    std::uint64_t seed = kBuiltinCalibrationSeed;
    std::string mode = "calibrated";
    std::string log_base = "e";
    std::vector<double> grid;
    auto* calib = app.add_subcommand("calibrate", "Estimate the constant profile by Monte Carlo");
    calib->add_option("--trials", trials, "Runs per grid amplitude (>= 1000)");
    calib->add_option("--seed", seed, "Random seed");
    calib->add_option("--mode", mode, "calibrated or theoretical (d = 600/sqrt(c))");
    calib->add_option("--log-base", log_base, "e or 2");
    calib->add_option("--grid", grid, "Amplitudes to calibrate at");
    calib->add_option("--out", out_path, "Output profile JSON, - for stdout");

    std::uint64_t max_m = 32;
    auto* verify = app.add_subcommand("verify-ae", "Compare the AE kernel with statevector QPE");
    verify->add_option("--max-m", max_m, "Largest register size (powers of two from 2)");

    std::string instance;
    std::string p0_name;
    std::string p1_name;
    double delta = 0.01;
    std::int64_t T = 1;
    auto* bounds = app.add_subcommand("bounds", "Distinguishability bounds for two distributions");
    bounds->add_option("--instance", instance, "hard-statebased:m:sigma or hard-subgaussian:m:sigma");
    bounds->add_option("--p0", p0_name, "First distribution designator");
    bounds->add_option("--p1", p1_name, "Second distribution designator");
    bounds->add_option("--delta", delta, "Target failure probability");
    bounds->add_option("--T", T, "Number of copies for the Helstrom bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*sweep) return cmd_sweep(config_path, out_path, threads);
        if (*summ) return cmd_summarize(in_path, bound, profile);
        if (*slope) return cmd_slope(in_path, x_col, y_col, pct);
        if (*calib) return cmd_calibrate(trials, seed, mode, log_base, grid, out_path);
        if (*verify) return cmd_verify_ae(max_m);
        if (*bounds) return cmd_bounds(instance, p0_name, p1_name, delta, T);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qmean: %s\n", e.what());
        return kConfigError;
    }
    return kConfigError;
}
