#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "qmean/finite_dist.hpp"
#include "test_support.hpp"

namespace qmean {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FiniteDist uniform_int(int lo, int hi) {
    std::vector<std::pair<double, double>> cells;
    for (int v = lo; v <= hi; ++v) {
        cells.emplace_back(v, 1.0 / (hi - lo + 1));
    }
    return FiniteDist::from_atoms(std::move(cells));
}

// Quantile straight from the definition: the largest support value x with
// Pr[X >= x] >= p, each tail summed independently.
double quantile_by_definition(const FiniteDist& d, double p) {
    double best = -kInf;
    for (double x : d.support()) {
        double tail = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d.support()[j] >= x) {
                tail += d.probs()[j];
            }
        }
        if (tail >= p - 1e-12) {
            best = std::max(best, x);
        }
    }
    return best;
}

TEST(FiniteDist, MakeSortsMergesAndDropsZeros) {
    const double values[] = {3.0, 1.0, 3.0, 2.0};
    const double probs[] = {0.25, 0.5, 0.25, 0.0};
    const FiniteDist d = FiniteDist::make(values, probs);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.support()[0], 1.0);
    EXPECT_EQ(d.support()[1], 3.0);
    EXPECT_DOUBLE_EQ(d.probs()[1], 0.5);
}

TEST(FiniteDist, MakeRejectsBadInput) {
    const double v2[] = {0.0, 1.0};
    const double bad_sum[] = {0.5, 0.6};
    const double negative[] = {1.5, -0.5};
    const double v1[] = {0.0};
    const double nan_value[] = {std::nan("")};
    const double one[] = {1.0};
    EXPECT_THROW(FiniteDist::make(v2, bad_sum), std::invalid_argument);
    EXPECT_THROW(FiniteDist::make(v2, negative), std::invalid_argument);
    EXPECT_THROW(FiniteDist::make(v1, bad_sum), std::invalid_argument);
    EXPECT_THROW(FiniteDist::make(nan_value, one), std::invalid_argument);
    EXPECT_THROW(FiniteDist::make({}, {}), std::invalid_argument);
}

TEST(FiniteDist, MomentsOfSimpleDistributions) {
    const Moments fair = moments(uniform_int(0, 1));
    EXPECT_DOUBLE_EQ(fair.mean, 0.5);
    EXPECT_DOUBLE_EQ(fair.variance, 0.25);
    EXPECT_DOUBLE_EQ(fair.second_moment, 0.5);

    const Moments point = moments(FiniteDist::point(7.0));
    EXPECT_EQ(point.mean, 7.0);
    EXPECT_EQ(point.variance, 0.0);
}

TEST(FiniteDist, QuantileExamples) {
    const FiniteDist u = uniform_int(1, 100);
    EXPECT_EQ(quantile(u, 0.01), 100.0);
    EXPECT_EQ(quantile(u, 0.5), 51.0);
    EXPECT_EQ(quantile(u, 1.0), 1.0);
    EXPECT_THROW(quantile(u, 0.0), std::invalid_argument);
    EXPECT_THROW(quantile(u, 1.5), std::invalid_argument);
}

TEST(FiniteDist, TruncatedMeanUsesHalfOpenInterval) {
    const FiniteDist u = uniform_int(1, 4);
    EXPECT_DOUBLE_EQ(truncated_mean(u, 1.0, 3.0), (2.0 + 3.0) / 4.0);
    EXPECT_DOUBLE_EQ(truncated_mean(u, 0.0, 4.0), 2.5);
    EXPECT_THROW(truncated_mean(u, 2.0, 2.0), std::invalid_argument);
}

TEST(FiniteDist, ConditionalAbove) {
    const FiniteDist u = uniform_int(1, 4);
    const ConditionalDist c = conditional_above(u, 2.0);
    EXPECT_EQ(c.tail, 0.5);
    ASSERT_TRUE(c.dist);
    EXPECT_EQ(*c.dist, uniform_int(3, 4));

    const ConditionalDist empty = conditional_above(u, 4.0);
    EXPECT_FALSE(empty.dist);
    EXPECT_EQ(empty.tail, 0.0);

    const ConditionalDist all = conditional_above(u, -kInf);
    EXPECT_EQ(all.tail, 1.0);
    EXPECT_EQ(*all.dist, u);
}

TEST(FiniteDist, SamplingIsDeterministicAndUnbiased) {
    const FiniteDist fair = uniform_int(0, 1);
    RandomSource a(11);
    RandomSource b(11);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(fair.sample(a), fair.sample(b));
    }
    RandomSource rng(3);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        sum += fair.sample(rng);
    }
    EXPECT_NEAR(sum / draws, 0.5, 0.005);
    EXPECT_EQ(FiniteDist::point(7.0).sample(rng), 7.0);
}

TEST(FiniteDist, SampleAboveMatchesConditional) {
    const FiniteDist u = uniform_int(1, 4);
    RandomSource rng(5);
    int threes = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double y = u.sample_above(2.0, rng);
        ASSERT_TRUE(y == 3.0 || y == 4.0);
        threes += y == 3.0;
    }
    EXPECT_NEAR(threes / static_cast<double>(draws), 0.5, 0.01);
    EXPECT_THROW(u.sample_above(4.0, rng), std::invalid_argument);
}

TEST(FiniteDist, HardSubgaussianInstance) {
    const auto [p0, p1] = hard_instance_subgaussian(10.0, 1.0);
    EXPECT_NEAR(p0.max(), 10.0503781525921, 1e-12);
    EXPECT_NEAR(moments(p0).variance, 1.0, 1e-12);
    EXPECT_NEAR(moments(p1).variance, 1.0, 1e-12);
    const double gap = moments(p0).mean - moments(p1).mean;
    EXPECT_NEAR(gap, 0.201007563051842, 1e-12);
    EXPECT_GT(gap, 0.2);
    EXPECT_THROW(hard_instance_subgaussian(1.0, 1.0), std::invalid_argument);
    for (double m : {2.0, 10.0, 100.0}) {
        const auto pair = hard_instance_subgaussian(m, 1.7);
        EXPECT_NEAR(moments(pair.first).variance / (1.7 * 1.7), 1.0, 1e-12) << m;
        EXPECT_NEAR(moments(pair.second).variance / (1.7 * 1.7), 1.0, 1e-12) << m;
    }
}

TEST(FiniteDist, HardStateBasedInstance) {
    const StateBasedInstance inst = hard_instance_statebased(10.0, 1.0);
    EXPECT_NEAR(inst.alpha, 1.33430782547009, 1e-12);
    EXPECT_NEAR(inst.b, 10.0 / 3.0, 1e-12);
    EXPECT_NEAR(inst.p0.probs().back(), 0.379736659610103, 1e-12);
    EXPECT_NEAR(moments(inst.p1).variance, 1.0, 1e-12);
    const double sigma0 = std::sqrt(moments(inst.p0).variance);
    EXPECT_NEAR(sigma0, 1.61773754552552, 1e-12);
    EXPECT_GE(sigma0, 1.0);
    EXPECT_LE(sigma0, 2.0);
    // m = 1.5 pushes e^alpha / m above 1.
    EXPECT_THROW(hard_instance_statebased(1.5, 1.0), std::invalid_argument);
    EXPECT_THROW(hard_instance_statebased(1.0, 1.0), std::invalid_argument);
}

TEST(FiniteDistProperty, QuantileMatchesDefinition) {
    RandomSource rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        const FiniteDist d = testing::random_dist(rng);
        for (double p : {1e-3, 0.05, 0.3, 0.5, 0.77, 1.0}) {
            const double q = quantile(d, p);
            EXPECT_EQ(q, quantile_by_definition(d, p));
            EXPECT_GE(d.tail_at_least(q), p - 1e-12);
            for (double x : d.support()) {
                if (x > q) {
                    EXPECT_LT(d.tail_at_least(x), p);
                }
            }
        }
    }
}

TEST(FiniteDistProperty, TruncatedMeanIsAdditive) {
    RandomSource rng(102);
    for (int trial = 0; trial < 300; ++trial) {
        const FiniteDist d = testing::random_dist(rng);
        const double a = -25.0 + 10.0 * rng.uniform();
        const double b = a + 1.0 + 20.0 * rng.uniform();
        const double c = b + 1.0 + 20.0 * rng.uniform();
        EXPECT_NEAR(truncated_mean(d, a, c), truncated_mean(d, a, b) + truncated_mean(d, b, c),
                    1e-12);
    }
}

TEST(FiniteDistProperty, ShiftSplitIdentities) {
    RandomSource rng(103);
    for (int trial = 0; trial < 300; ++trial) {
        const FiniteDist d = testing::random_dist(rng);
        const double eta = d.sample(rng) + (rng.bernoulli(0.5) ? 0.0 : 0.37);
        const auto [plus, minus] = shift_split(d, eta);
        const Moments m = moments(d);
        const Moments mp = moments(plus);
        const Moments mm = moments(minus);
        EXPECT_NEAR(eta + mp.mean - mm.mean, m.mean, 1e-10 * (1.0 + std::abs(m.mean)));
        const double centered = m.variance + (m.mean - eta) * (m.mean - eta);
        EXPECT_NEAR(mp.second_moment + mm.second_moment, centered, 1e-10 * (1.0 + centered));
        EXPECT_GE(plus.min(), 0.0);
        EXPECT_GE(minus.min(), 0.0);
    }
}

TEST(FiniteDistProperty, PairSquareDiffMeanIsVariance) {
    RandomSource rng(104);
    for (int trial = 0; trial < 300; ++trial) {
        const FiniteDist d = testing::random_dist(rng);
        const double var = moments(d).variance;
        EXPECT_NEAR(moments(pair_square_diff(d)).mean, var, 1e-10 * (1.0 + var));
    }
}

TEST(FiniteDistProperty, ConditionalTailIsExactSum) {
    RandomSource rng(105);
    for (int trial = 0; trial < 300; ++trial) {
        const FiniteDist d = testing::random_dist(rng);
        const double x = d.sample(rng) - 0.5 * rng.uniform();
        double tail = 0.0;
        for (std::size_t i = d.size(); i-- > 0;) {
            if (d.support()[i] > x) {
                tail += d.probs()[i];
            }
        }
        EXPECT_EQ(conditional_above(d, x).tail, tail);
    }
}

TEST(FiniteDistProperty, VarianceAgreesWithSecondMoment) {
    RandomSource rng(106);
    for (int trial = 0; trial < 300; ++trial) {
        const Moments m = moments(testing::random_dist(rng));
        EXPECT_NEAR(m.variance, m.second_moment - m.mean * m.mean,
                    1e-10 * std::max(1.0, m.second_moment));
        EXPECT_GE(m.variance, 0.0);
    }
}

TEST(FiniteDistProperty, ScaleShiftMoments) {
    RandomSource rng(107);
    for (int trial = 0; trial < 200; ++trial) {
        const FiniteDist d = testing::random_dist(rng);
        const Moments m = moments(d);
        const Moments s = moments(scale_shift(d, -2.0, 3.0));
        EXPECT_NEAR(s.mean, -2.0 * m.mean + 3.0, 1e-10 * (1.0 + std::abs(m.mean)));
        EXPECT_NEAR(s.variance, 4.0 * m.variance, 1e-10 * (1.0 + m.variance));
    }
    EXPECT_THROW(scale_shift(FiniteDist::point(1.0), 0.0, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace qmean
