#include "qmean/log_base.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmean {

double log_inv(double delta, LogBase base) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    return base == LogBase::natural ? -std::log(delta) : -std::log2(delta);
}

std::string_view to_string(LogBase base) {
    return base == LogBase::natural ? "e" : "2";
}

LogBase parse_log_base(std::string_view text) {
    if (text == "e" || text == "natural") {
        return LogBase::natural;
    }
    if (text == "2") {
        return LogBase::two;
    }
    throw std::invalid_argument("log base must be \"e\" or \"2\", got \"" + std::string(text) + "\"");
}

}  // namespace qmean
