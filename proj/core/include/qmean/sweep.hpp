#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qmean {

enum class EstimatorKind {
    subgauss,
    relative,
    seq_relative,
    bern,
    quantile,
    seq_bern,
    median_of_means,
    empirical,
    classical_truncated,
};

std::string_view to_string(EstimatorKind kind);

/// Throws std::invalid_argument for unknown names.
EstimatorKind parse_estimator(std::string_view name);

/// Grid keys each estimator consumes ("n", "epsilon", "delta", "p").
std::vector<std::string_view> required_grid_keys(EstimatorKind kind);

struct SweepConfig {
    EstimatorKind estimator = EstimatorKind::subgauss;
    std::string distribution;
    std::vector<double> n;
    std::vector<double> epsilon;
    std::vector<double> delta;
    std::vector<double> p;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    /// "theoretical", "calibrated" or a profile file path.
    std::string profile = "calibrated";
    std::optional<std::uint64_t> budget;
    /// Coefficient-of-variation bound, required by the relative estimator.
    std::optional<double> ch;
};

/// Parses a single JSON document:
///
///   {"estimator": "subgauss", "distribution": "uniform:0..1:11",
///    "grid": {"n": [32, 64], "delta": [0.1]}, "trials": 100, "seed": 7,
///    "profile": "calibrated", "budget": 100000, "ch": 1.0}
///
/// Unknown keys, missing or superfluous grid keys, empty grids and trials < 1
/// are rejected with std::invalid_argument.
SweepConfig parse_sweep_config(std::string_view json_text);
SweepConfig load_sweep_config(const std::string& path);

struct GridPoint {
    std::optional<double> n;
    std::optional<double> epsilon;
    std::optional<double> delta;
    std::optional<double> p;
};

/// Cartesian product in n, epsilon, delta, p order (n outermost).
std::vector<GridPoint> expand_grid(const SweepConfig& config);

struct SweepRow {
    std::string estimator;
    std::string distribution;
    GridPoint point;
    std::uint64_t trial = 0;
    double estimate = 0.0;
    double true_mean = 0.0;
    double abs_error = 0.0;
    std::optional<double> rel_error;
    std::uint64_t oracle_experiments = 0;
    std::uint64_t aa_applications = 0;
    bool interrupted = false;
    std::uint64_t seed = 0;
};

struct SkippedPoint {
    std::size_t grid_index = 0;
    GridPoint point;
    std::string reason;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SkippedPoint> skipped;
};

/// Runs every (grid point, trial) pair on `threads` workers (0 = hardware
/// concurrency). Each pair owns the random stream (grid_index << 32) | trial
/// of the configured seed, so the rows do not depend on scheduling. Grid
/// points whose parameters violate an estimator precondition are dropped
/// whole and listed in `skipped`.
SweepResult run_sweep(const SweepConfig& config, unsigned threads = 0);

/// Column order of the CSV format.
const std::vector<std::string>& csv_header();

/// Header plus one line per row; 17 significant digits, RFC 4180 quoting.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Reads the format written by write_csv. Throws std::invalid_argument on a
/// header mismatch or malformed field.
std::vector<SweepRow> read_csv(std::istream& in);

/// 17 significant digits ("%.17g"), enough to round-trip any double.
std::string format_double(double v);

}  // namespace qmean
