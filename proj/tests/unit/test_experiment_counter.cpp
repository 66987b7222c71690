#include <gtest/gtest.h>

#include "qmean/experiment_counter.hpp"

namespace qmean {
namespace {

TEST(ExperimentCounter, UncappedChargesAccumulate) {
    ExperimentCounter c;
    EXPECT_EQ(c.charge_oracle(5), 5u);
    c.charge_aa(3);
    EXPECT_EQ(c.oracle_experiments(), 5u);
    EXPECT_EQ(c.aa_applications(), 3u);
    EXPECT_FALSE(c.interrupted());
    EXPECT_FALSE(c.remaining());
}

TEST(ExperimentCounter, BudgetTruncatesAndInterrupts) {
    ExperimentCounter c(std::uint64_t{10});
    EXPECT_EQ(c.charge_oracle(10), 10u);
    EXPECT_FALSE(c.interrupted());
    EXPECT_EQ(c.charge_oracle(1), 0u);
    EXPECT_TRUE(c.interrupted());
    EXPECT_EQ(c.oracle_experiments(), 10u);

    ExperimentCounter d(std::uint64_t{10});
    EXPECT_EQ(d.charge_oracle(7), 7u);
    EXPECT_EQ(d.charge_oracle(7), 3u);
    EXPECT_TRUE(d.interrupted());
    EXPECT_EQ(d.oracle_experiments(), 10u);
}

TEST(ExperimentCounter, ChildInheritsTighterCap) {
    ExperimentCounter parent(std::uint64_t{100});
    parent.charge_oracle(60);
    ExperimentCounter loose = parent.child(std::uint64_t{1000});
    EXPECT_EQ(loose.budget(), std::optional<std::uint64_t>(40));
    ExperimentCounter tight = parent.child(std::uint64_t{5});
    EXPECT_EQ(tight.budget(), std::optional<std::uint64_t>(5));
    ExperimentCounter free_parent;
    EXPECT_FALSE(free_parent.child(std::nullopt).budget());
}

TEST(ExperimentCounter, AbsorbPropagatesOnlyParentExhaustion) {
    ExperimentCounter parent(std::uint64_t{100});
    ExperimentCounter local = parent.child(std::uint64_t{10});
    local.charge_oracle(20);
    local.charge_aa(4);
    parent.absorb(local);
    EXPECT_EQ(parent.oracle_experiments(), 10u);
    EXPECT_EQ(parent.aa_applications(), 4u);
    EXPECT_FALSE(parent.interrupted());

    ExperimentCounter rest = parent.child(std::nullopt);
    rest.charge_oracle(1000);
    parent.absorb(rest);
    EXPECT_EQ(parent.oracle_experiments(), 100u);
    EXPECT_TRUE(parent.interrupted());
}

}  // namespace
}  // namespace qmean
