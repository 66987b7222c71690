#include "qmean/constant_profile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qmean/calibration.hpp"

namespace qmean {

void apply_couplings(ConstantProfile& p) {
    p.c = (p.c0 * p.c0) / (p.c1 * p.c1 * std::sqrt(191.0));
    p.c_prime = 190.0 * p.c1;
    p.c1_alg3 = 16.0 * p.c_prime_seq * std::sqrt(1.0 + p.c_seq);
    p.c2_alg3 = 4.0 * (1.0 + p.c_seq) / std::sqrt(1.0 - p.c_seq);
}

double theoretical_d(double c) {
    return 600.0 / std::sqrt(c);
}

void validate(const ConstantProfile& p) {
    const double all[] = {p.c0,      p.c1,      p.c,     p.c_prime,     p.d,
                          p.c1_alg3, p.c2_alg3, p.c_seq, p.c_prime_seq, p.c_dprime_seq};
    for (double v : all) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("profile: constants must be positive and finite");
        }
    }
    if (!(p.c < 1.0)) {
        throw std::invalid_argument("profile: c must be below 1");
    }
    if (!(p.c0 < p.c1)) {
        throw std::invalid_argument("profile: c0 must be below c1");
    }
    if (!(p.c_seq < 1.0)) {
        throw std::invalid_argument("profile: c_seq must be below 1");
    }
}

const ConstantProfile& theoretical_profile() {
    static const ConstantProfile p = profile_from_run(builtin_calibration(), ProfileMode::theoretical);
    return p;
}

const ConstantProfile& calibrated_profile() {
    static const ConstantProfile p = profile_from_run(builtin_calibration(), ProfileMode::calibrated);
    return p;
}

std::string_view to_string(ProfileMode mode) {
    return mode == ProfileMode::theoretical ? "theoretical" : "calibrated";
}

std::string profile_to_json(const ConstantProfile& p) {
    nlohmann::ordered_json doc;
    doc["mode"] = std::string(to_string(p.mode));
    doc["log_base"] = std::string(to_string(p.log_base));
    doc["c0"] = p.c0;
    doc["c1"] = p.c1;
    doc["c"] = p.c;
    doc["c_prime"] = p.c_prime;
    doc["d"] = p.d;
    doc["c1_alg3"] = p.c1_alg3;
    doc["c2_alg3"] = p.c2_alg3;
    doc["c_seq"] = p.c_seq;
    doc["c_prime_seq"] = p.c_prime_seq;
    doc["c_dprime_seq"] = p.c_dprime_seq;
    return doc.dump(2);
}

ConstantProfile profile_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("profile: ") + e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("profile: expected a JSON object");
    }
    ConstantProfile p;
    for (const auto& [key, value] : doc.items()) {
        if (key == "mode") {
            const auto m = value.get<std::string>();
            if (m != "theoretical" && m != "calibrated") {
                throw std::invalid_argument("profile: unknown mode '" + m + "'");
            }
            p.mode = m == "theoretical" ? ProfileMode::theoretical : ProfileMode::calibrated;
            continue;
        }
        if (key == "log_base") {
            p.log_base = parse_log_base(value.get<std::string>());
            continue;
        }
        double* slot = key == "c0"             ? &p.c0
                       : key == "c1"           ? &p.c1
                       : key == "c"            ? &p.c
                       : key == "c_prime"      ? &p.c_prime
                       : key == "d"            ? &p.d
                       : key == "c1_alg3"      ? &p.c1_alg3
                       : key == "c2_alg3"      ? &p.c2_alg3
                       : key == "c_seq"        ? &p.c_seq
                       : key == "c_prime_seq"  ? &p.c_prime_seq
                       : key == "c_dprime_seq" ? &p.c_dprime_seq
                                               : nullptr;
        if (slot == nullptr) {
            throw std::invalid_argument("profile: unknown key '" + key + "'");
        }
        if (!value.is_number()) {
            throw std::invalid_argument("profile: '" + key + "' must be a number");
        }
        *slot = value.get<double>();
    }
    validate(p);
    return p;
}

ConstantProfile load_profile(std::string_view designator) {
    if (designator == "theoretical") {
        return theoretical_profile();
    }
    if (designator == "calibrated") {
        return calibrated_profile();
    }
    std::ifstream in{std::string(designator)};
    if (!in) {
        throw std::invalid_argument("profile: cannot open '" + std::string(designator) + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return profile_from_json(buf.str());
}

}  // namespace qmean
