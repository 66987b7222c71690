#pragma once

#include <cstdint>
#include <optional>

namespace qmean {

/// Tallies oracle experiments and amplitude-amplification applications, with
/// an optional hard cap on oracle experiments.
///
/// A charge that would cross the cap is truncated at the cap and marks the
/// counter interrupted. Callers check interrupted() after each charge and
/// stop the current procedure.
class ExperimentCounter {
   public:
    ExperimentCounter() = default;
    explicit ExperimentCounter(std::optional<std::uint64_t> budget) : budget_(budget) {}

    std::uint64_t oracle_experiments() const { return oracle_; }
    std::uint64_t aa_applications() const { return aa_; }
    std::optional<std::uint64_t> budget() const { return budget_; }
    bool interrupted() const { return interrupted_; }

    /// Remaining oracle experiments before the cap (nullopt if uncapped).
    std::optional<std::uint64_t> remaining() const;

    /// Charges up to `units` oracle experiments and returns how many were
    /// actually charged. Marks the counter interrupted if the cap truncated
    /// the charge.
    std::uint64_t charge_oracle(std::uint64_t units);

    /// AA applications are never capped.
    void charge_aa(std::uint64_t units) { aa_ += units; }

    /// A fresh counter whose cap is min(local_budget, remaining()).
    ExperimentCounter child(std::optional<std::uint64_t> local_budget) const;

    /// Adds a child's tallies. If the child was interrupted because the
    /// parent's cap was reached, the parent becomes interrupted too; an
    /// interruption of the child's own, tighter cap stays local.
    void absorb(const ExperimentCounter& child);

   private:
    std::uint64_t oracle_ = 0;
    std::uint64_t aa_ = 0;
    std::optional<std::uint64_t> budget_;
    bool interrupted_ = false;
};

}  // namespace qmean
