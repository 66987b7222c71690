#include "qmean/experiment_counter.hpp"

#include <algorithm>

namespace qmean {

std::optional<std::uint64_t> ExperimentCounter::remaining() const {
    if (!budget_) {
        return std::nullopt;
    }
    return *budget_ > oracle_ ? *budget_ - oracle_ : 0;
}

std::uint64_t ExperimentCounter::charge_oracle(std::uint64_t units) {
    std::uint64_t charged = units;
    if (budget_) {
        const std::uint64_t left = *remaining();
        if (units > left) {
            charged = left;
            interrupted_ = true;
        }
    }
    oracle_ += charged;
    return charged;
}

ExperimentCounter ExperimentCounter::child(std::optional<std::uint64_t> local_budget) const {
    std::optional<std::uint64_t> cap = local_budget;
    if (const auto left = remaining()) {
        cap = cap ? std::min(*cap, *left) : *left;
    }
    return ExperimentCounter(cap);
}

void ExperimentCounter::absorb(const ExperimentCounter& child) {
    oracle_ += child.oracle_;
    aa_ += child.aa_;
    if (child.interrupted_ && budget_ && oracle_ >= *budget_) {
        interrupted_ = true;
    }
}

}  // namespace qmean
