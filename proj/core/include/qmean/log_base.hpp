#pragma once

#include <string_view>

namespace qmean {

/// Base used for every log(1/delta) occurrence in the estimators.
enum class LogBase { natural, two };

/// log(1/delta) in the given base. Throws std::invalid_argument unless
/// 0 < delta < 1.
double log_inv(double delta, LogBase base);

std::string_view to_string(LogBase base);

/// Accepts "e" / "natural" and "2".
LogBase parse_log_base(std::string_view text);

}  // namespace qmean
