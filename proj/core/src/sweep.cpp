#include "qmean/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qmean/baselines.hpp"
#include "qmean/constant_profile.hpp"
#include "qmean/dist_spec.hpp"
#include "qmean/estimators.hpp"

namespace qmean {

namespace {

struct NamedKind {
    std::string_view name;
    EstimatorKind kind;
};

constexpr NamedKind kKinds[] = {
    {"subgauss", EstimatorKind::subgauss},
    {"relative", EstimatorKind::relative},
    {"seq-relative", EstimatorKind::seq_relative},
    {"bern", EstimatorKind::bern},
    {"quantile", EstimatorKind::quantile},
    {"seq-bern", EstimatorKind::seq_bern},
    {"median-of-means", EstimatorKind::median_of_means},
    {"empirical", EstimatorKind::empirical},
    {"classical-truncated", EstimatorKind::classical_truncated},
};

constexpr std::string_view kGridKeys[] = {"n", "epsilon", "delta", "p"};

std::vector<double> number_list(const nlohmann::json& v, std::string_view key) {
    if (!v.is_array() || v.empty()) {
        throw std::invalid_argument("config: grid." + std::string(key) +
                                    " must be a non-empty array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw std::invalid_argument("config: grid." + std::string(key) + " holds a non-number");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

std::uint64_t unsigned_field(const nlohmann::json& v, std::string_view key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw std::invalid_argument("config: " + std::string(key) +
                                    " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string string_field(const nlohmann::json& v, std::string_view key) {
    if (!v.is_string()) {
        throw std::invalid_argument("config: " + std::string(key) + " must be a string");
    }
    return v.get<std::string>();
}

struct TrialOutcome {
    double estimate = 0.0;
    std::uint64_t oracle = 0;
    std::uint64_t aa = 0;
    bool interrupted = false;
};

// Everything a trial needs that is shared read-only across workers.
struct SweepContext {
    const SweepConfig& config;
    FiniteDist dist;
    ConstantProfile profile;
    Moments mom;
};

std::uint64_t sample_count(double n) {
    if (!(n >= 1.0) || !std::isfinite(n)) {
        throw std::invalid_argument("sample count n must be at least 1");
    }
    return static_cast<std::uint64_t>(std::ceil(n));
}

std::vector<double> draw(const FiniteDist& d, std::uint64_t count, RandomSource& rng) {
    std::vector<double> xs(count);
    for (double& x : xs) {
        x = d.sample(rng);
    }
    return xs;
}

TrialOutcome from_report(const EstimateReport& r) {
    return {r.estimate, r.oracle_experiments, r.aa_applications, r.interrupted};
}

TrialOutcome run_trial(const SweepContext& ctx, const GridPoint& g, RandomSource& rng) {
    const SweepConfig& cfg = ctx.config;
    const QVar X(ctx.dist);
    switch (cfg.estimator) {
        case EstimatorKind::subgauss:
            return from_report(subgauss_est(X, *g.n, *g.delta, ctx.profile, rng, cfg.budget));
        case EstimatorKind::relative:
            return from_report(
                relative_est(X, *cfg.ch, *g.epsilon, *g.delta, ctx.profile, rng, cfg.budget));
        case EstimatorKind::seq_relative:
            return from_report(
                seq_relative_est(X, *g.epsilon, *g.delta, ctx.profile, rng, cfg.budget));
        case EstimatorKind::bern:
            return from_report(bern_est(X, *g.n, 0.0, std::max(0.0, ctx.dist.max()), *g.delta, rng,
                                        ctx.profile.log_base, cfg.budget));
        case EstimatorKind::quantile:
            return from_report(quantile_est(X, *g.p, *g.delta, ctx.profile, rng, cfg.budget));
        case EstimatorKind::seq_bern:
            return from_report(seq_bern_est(X, rng, cfg.budget));
        case EstimatorKind::median_of_means: {
            const std::uint64_t count = sample_count(*g.n);
            const auto xs = draw(ctx.dist, count, rng);
            return {median_of_means(xs, *g.delta), 2 * count, 0, false};
        }
        case EstimatorKind::empirical: {
            const std::uint64_t count = sample_count(*g.n);
            const auto xs = draw(ctx.dist, count, rng);
            return {empirical_mean(xs), 2 * count, 0, false};
        }
        case EstimatorKind::classical_truncated: {
            const std::uint64_t count = sample_count(*g.n);
            const auto xs = draw(ctx.dist, count, rng);
            return {classical_truncated_mean(xs, ctx.mom.second_moment, count), 2 * count, 0,
                    false};
        }
    }
    throw std::logic_error("unhandled estimator");
}

// The quantity each estimator targets.
double target_value(const SweepContext& ctx, const GridPoint& g) {
    switch (ctx.config.estimator) {
        case EstimatorKind::quantile:
            return quantile(ctx.dist, *g.p);
        case EstimatorKind::bern: {
            const double b = ctx.dist.max();
            return b > 0.0 ? truncated_mean(ctx.dist, 0.0, b) : 0.0;
        }
        default:
            return ctx.mom.mean;
    }
}

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

// Splits one CSV record, honouring quoted fields that may span lines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!any) {
        return false;
    }
    fields.push_back(std::move(field));
    return true;
}

double parse_double(const std::string& s) {
    // strtod rather than stod: subnormal values written by format_double
    // must read back instead of raising a range error.
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw std::invalid_argument("csv: bad number '" + s + "'");
    }
    return v;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return parse_double(s);
}

std::uint64_t parse_u64(const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-') {
        throw std::invalid_argument("csv: bad integer '" + s + "'");
    }
    return v;
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) {
            return k.name;
        }
    }
    return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
    for (const auto& k : kKinds) {
        if (k.name == name) {
            return k.kind;
        }
    }
    throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

std::vector<std::string_view> required_grid_keys(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::subgauss:
        case EstimatorKind::bern:
        case EstimatorKind::median_of_means:
            return {"n", "delta"};
        case EstimatorKind::relative:
        case EstimatorKind::seq_relative:
            return {"epsilon", "delta"};
        case EstimatorKind::quantile:
            return {"delta", "p"};
        case EstimatorKind::seq_bern:
            return {};
        case EstimatorKind::empirical:
        case EstimatorKind::classical_truncated:
            return {"n"};
    }
    return {};
}

SweepConfig parse_sweep_config(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("config: expected a JSON object");
    }
    SweepConfig cfg;
    bool has_estimator = false;
    bool has_distribution = false;
    bool has_trials = false;
    bool has_seed = false;
    nlohmann::json grid = nlohmann::json::object();
    for (const auto& [key, value] : doc.items()) {
        if (key == "estimator") {
            cfg.estimator = parse_estimator(string_field(value, key));
            has_estimator = true;
        } else if (key == "distribution") {
            cfg.distribution = string_field(value, key);
            has_distribution = true;
        } else if (key == "grid") {
            if (!value.is_object()) {
                throw std::invalid_argument("config: grid must be an object");
            }
            grid = value;
        } else if (key == "trials") {
            cfg.trials = unsigned_field(value, key);
            has_trials = true;
        } else if (key == "seed") {
            cfg.seed = unsigned_field(value, key);
            has_seed = true;
        } else if (key == "profile") {
            cfg.profile = string_field(value, key);
        } else if (key == "budget") {
            cfg.budget = unsigned_field(value, key);
        } else if (key == "ch") {
            if (!value.is_number()) {
                throw std::invalid_argument("config: ch must be a number");
            }
            cfg.ch = value.get<double>();
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (!has_estimator || !has_distribution || !has_trials || !has_seed) {
        throw std::invalid_argument(
            "config: estimator, distribution, trials and seed are required");
    }
    if (cfg.trials < 1) {
        throw std::invalid_argument("config: trials must be at least 1");
    }

    const auto wanted = required_grid_keys(cfg.estimator);
    for (const auto& [key, value] : grid.items()) {
        if (std::find(std::begin(kGridKeys), std::end(kGridKeys), key) == std::end(kGridKeys)) {
            throw std::invalid_argument("config: unknown grid key '" + key + "'");
        }
        if (std::find(wanted.begin(), wanted.end(), key) == wanted.end()) {
            throw std::invalid_argument("config: estimator " +
                                        std::string(to_string(cfg.estimator)) +
                                        " does not use grid." + key);
        }
        auto values = number_list(value, key);
        if (key == "n") {
            cfg.n = std::move(values);
        } else if (key == "epsilon") {
            cfg.epsilon = std::move(values);
        } else if (key == "delta") {
            cfg.delta = std::move(values);
        } else {
            cfg.p = std::move(values);
        }
    }
    for (std::string_view key : wanted) {
        if (!grid.contains(std::string(key))) {
            throw std::invalid_argument("config: estimator " +
                                        std::string(to_string(cfg.estimator)) + " needs grid." +
                                        std::string(key));
        }
    }
    if (cfg.estimator == EstimatorKind::relative && !cfg.ch) {
        throw std::invalid_argument("config: the relative estimator needs ch");
    }
    if (cfg.estimator != EstimatorKind::relative && cfg.ch) {
        throw std::invalid_argument("config: ch only applies to the relative estimator");
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_sweep_config(buf.str());
}

std::vector<GridPoint> expand_grid(const SweepConfig& cfg) {
    const auto axis = [](const std::vector<double>& values) {
        std::vector<std::optional<double>> out(values.begin(), values.end());
        if (out.empty()) {
            out.emplace_back(std::nullopt);
        }
        return out;
    };
    std::vector<GridPoint> points;
    for (const auto& n : axis(cfg.n)) {
        for (const auto& eps : axis(cfg.epsilon)) {
            for (const auto& delta : axis(cfg.delta)) {
                for (const auto& p : axis(cfg.p)) {
                    points.push_back({n, eps, delta, p});
                }
            }
        }
    }
    return points;
}

SweepResult run_sweep(const SweepConfig& config, unsigned threads) {
    SweepContext ctx{config, resolve_distribution(config.distribution),
                     load_profile(config.profile), {}};
    ctx.mom = moments(ctx.dist);

    const std::vector<GridPoint> grid = expand_grid(config);
    const std::size_t tasks = grid.size() * config.trials;
    std::vector<SweepRow> rows(tasks);
    std::vector<std::string> errors(grid.size());
    std::mutex error_mutex;

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        while (true) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks) {
                return;
            }
            const std::size_t gi = t / config.trials;
            const std::uint64_t trial = t % config.trials;
            {
                std::lock_guard lock(error_mutex);
                if (!errors[gi].empty()) {
                    continue;
                }
            }
            const GridPoint& g = grid[gi];
            RandomSource rng(config.seed, (static_cast<std::uint64_t>(gi) << 32) | trial);
            try {
                const TrialOutcome out = run_trial(ctx, g, rng);
                SweepRow& row = rows[t];
                row.estimator = std::string(to_string(config.estimator));
                row.distribution = config.distribution;
                row.point = g;
                row.trial = trial;
                row.estimate = out.estimate;
                row.true_mean = target_value(ctx, g);
                row.abs_error = std::abs(out.estimate - row.true_mean);
                if (row.true_mean != 0.0) {
                    row.rel_error = row.abs_error / std::abs(row.true_mean);
                }
                row.oracle_experiments = out.oracle;
                row.aa_applications = out.aa;
                row.interrupted = out.interrupted;
                row.seed = config.seed;
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (errors[gi].empty()) {
                    errors[gi] = e.what();
                }
            }
        }
    };

    unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }

    SweepResult result;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        if (!errors[gi].empty()) {
            result.skipped.push_back({gi, grid[gi], errors[gi]});
            continue;
        }
        for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
            result.rows.push_back(std::move(rows[gi * config.trials + trial]));
        }
    }
    return result;
}

const std::vector<std::string>& csv_header() {
    static const std::vector<std::string> header = {
        "estimator",   "distribution",       "n",               "epsilon",
        "delta",       "p",                  "trial",           "estimate",
        "true_mean",   "abs_error",          "rel_error",       "oracle_experiments",
        "aa_applications", "interrupted",    "seed",
    };
    return header;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    const auto& header = csv_header();
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    out << '\n';
    for (const SweepRow& r : rows) {
        out << quote_field(r.estimator) << ',' << quote_field(r.distribution) << ','
            << opt_field(r.point.n) << ',' << opt_field(r.point.epsilon) << ','
            << opt_field(r.point.delta) << ',' << opt_field(r.point.p) << ',' << r.trial << ','
            << format_double(r.estimate) << ',' << format_double(r.true_mean) << ','
            << format_double(r.abs_error) << ',' << opt_field(r.rel_error) << ','
            << r.oracle_experiments << ',' << r.aa_applications << ',' << (r.interrupted ? 1 : 0)
            << ',' << r.seed << '\n';
    }
}

std::vector<SweepRow> read_csv(std::istream& in) {
    std::vector<std::string> fields;
    if (!read_record(in, fields) || fields != csv_header()) {
        throw std::invalid_argument("csv: unexpected header");
    }
    std::vector<SweepRow> rows;
    while (read_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) {
            continue;
        }
        if (fields.size() != csv_header().size()) {
            throw std::invalid_argument("csv: row " + std::to_string(rows.size() + 1) +
                                        " has the wrong number of fields");
        }
        SweepRow r;
        r.estimator = fields[0];
        r.distribution = fields[1];
        r.point = {parse_opt(fields[2]), parse_opt(fields[3]), parse_opt(fields[4]),
                   parse_opt(fields[5])};
        r.trial = parse_u64(fields[6]);
        r.estimate = parse_double(fields[7]);
        r.true_mean = parse_double(fields[8]);
        r.abs_error = parse_double(fields[9]);
        r.rel_error = parse_opt(fields[10]);
        r.oracle_experiments = parse_u64(fields[11]);
        r.aa_applications = parse_u64(fields[12]);
        if (fields[13] != "0" && fields[13] != "1") {
            throw std::invalid_argument("csv: interrupted must be 0 or 1");
        }
        r.interrupted = fields[13] == "1";
        r.seed = parse_u64(fields[14]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace qmean
