#include "qmean/dist_spec.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace qmean {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        parts.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

double to_double(const std::string& s, std::string_view what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("bad number '" + s + "' for " + std::string(what));
    }
    return v;
}

std::size_t to_count(const std::string& s, std::string_view what) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
        throw std::invalid_argument("bad count '" + s + "' for " + std::string(what));
    }
    return v;
}

void expect_fields(const std::vector<std::string>& parts, std::size_t lo, std::size_t hi,
                   std::string_view designator) {
    if (parts.size() < lo || parts.size() > hi) {
        throw std::invalid_argument("malformed distribution '" + std::string(designator) + "'");
    }
}

std::size_t instance_index(const std::vector<std::string>& parts, std::size_t at) {
    if (parts.size() <= at) {
        return 0;
    }
    if (parts[at] == "0") {
        return 0;
    }
    if (parts[at] == "1") {
        return 1;
    }
    throw std::invalid_argument("hard instance index must be 0 or 1");
}

}  // namespace

FiniteDist discretized_pareto(double alpha, double xmin, std::size_t atoms) {
    if (!(alpha > 0.0) || !(xmin > 0.0) || atoms == 0) {
        throw std::invalid_argument("pareto: requires alpha > 0, xmin > 0, atoms >= 1");
    }
    std::vector<std::pair<double, double>> cells;
    cells.reserve(atoms);
    const double weight = 1.0 / static_cast<double>(atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
        const double u = (static_cast<double>(i) + 0.5) * weight;
        cells.emplace_back(xmin * std::pow(1.0 - u, -1.0 / alpha), weight);
    }
    return FiniteDist::from_atoms(std::move(cells));
}

FiniteDist resolve_distribution(std::string_view designator) {
    const auto parts = split(designator, ':');
    const std::string& kind = parts.front();

    if (kind == "point") {
        expect_fields(parts, 2, 2, designator);
        return FiniteDist::point(to_double(parts[1], "point value"));
    }
    if (kind == "bernoulli") {
        expect_fields(parts, 2, 2, designator);
        const double q = to_double(parts[1], "bernoulli q");
        if (!(q >= 0.0 && q <= 1.0)) {
            throw std::invalid_argument("bernoulli: q must lie in [0, 1]");
        }
        return FiniteDist::from_atoms({{0.0, 1.0 - q}, {1.0, q}});
    }
    if (kind == "uniform") {
        expect_fields(parts, 3, 3, designator);
        const auto range = parts[1].find("..");
        if (range == std::string::npos) {
            throw std::invalid_argument("uniform: expected a..b range");
        }
        const double a = to_double(parts[1].substr(0, range), "uniform lower end");
        const double b = to_double(parts[1].substr(range + 2), "uniform upper end");
        const std::size_t k = to_count(parts[2], "uniform atoms");
        if (b < a || (k == 1 && a != b) || (k > 1 && a == b)) {
            throw std::invalid_argument("uniform: inconsistent range and atom count");
        }
        std::vector<std::pair<double, double>> atoms;
        atoms.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double x = k == 1 ? a
                                    : a + (b - a) * static_cast<double>(i) /
                                              static_cast<double>(k - 1);
            atoms.emplace_back(x, 1.0 / static_cast<double>(k));
        }
        return FiniteDist::from_atoms(std::move(atoms));
    }
    if (kind == "pareto") {
        expect_fields(parts, 4, 4, designator);
        return discretized_pareto(to_double(parts[1], "pareto alpha"),
                                  to_double(parts[2], "pareto xmin"),
                                  to_count(parts[3], "pareto atoms"));
    }
    if (kind == "hard-subgaussian") {
        expect_fields(parts, 3, 4, designator);
        auto pair = hard_instance_subgaussian(to_double(parts[1], "m"), to_double(parts[2], "sigma"));
        return instance_index(parts, 3) == 0 ? pair.first : pair.second;
    }
    if (kind == "hard-statebased") {
        expect_fields(parts, 3, 4, designator);
        auto inst = hard_instance_statebased(to_double(parts[1], "m"), to_double(parts[2], "sigma"));
        return instance_index(parts, 3) == 0 ? inst.p0 : inst.p1;
    }

    std::ifstream in{std::string(designator)};
    if (!in) {
        throw std::invalid_argument("unknown distribution '" + std::string(designator) + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_distribution_json(buf.str());
}

FiniteDist parse_distribution_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("distribution file: ") + e.what());
    }
    if (!doc.is_array()) {
        throw std::invalid_argument("distribution file: expected a JSON array");
    }
    std::vector<double> values;
    std::vector<double> probs;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("value") || !entry.contains("prob") ||
            !entry["value"].is_number() || !entry["prob"].is_number() || entry.size() != 2) {
            throw std::invalid_argument(
                "distribution file: entries must be {\"value\": number, \"prob\": number}");
        }
        values.push_back(entry["value"].get<double>());
        probs.push_back(entry["prob"].get<double>());
    }
    return FiniteDist::make(values, probs);
}

std::string distribution_to_json(const FiniteDist& d) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        doc.push_back({{"value", d.support()[i]}, {"prob", d.probs()[i]}});
    }
    return doc.dump(2);
}

}  // namespace qmean
