#include <benchmark/benchmark.h>

#include "qmean/amplitude.hpp"
#include "qmean/constant_profile.hpp"
#include "qmean/dist_spec.hpp"
#include "qmean/estimators.hpp"
#include "qmean/statevector_qpe.hpp"

namespace {

using namespace qmean;

void BM_AeOutcomeDist(benchmark::State& state) {
    const auto M = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ae_outcome_dist(0.3, M));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AeOutcomeDist)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_AestSample(benchmark::State& state) {
    const auto M = static_cast<std::uint64_t>(state.range(0));
    RandomSource rng(1);
    for (auto _ : state) {
        ExperimentCounter counter;
        benchmark::DoNotOptimize(aest_sample(0.3, M, rng, counter, 2));
    }
}
BENCHMARK(BM_AestSample)->RangeMultiplier(16)->Range(64, 1 << 24);

void BM_SeqAamp(benchmark::State& state) {
    const double p = 1.0 / static_cast<double>(state.range(0));
    RandomSource rng(2);
    for (auto _ : state) {
        ExperimentCounter counter;
        benchmark::DoNotOptimize(seq_aamp(p, rng, counter, 2));
    }
}
BENCHMARK(BM_SeqAamp)->RangeMultiplier(100)->Range(2, 2000000);

void BM_StatevectorQpe(benchmark::State& state) {
    const auto M = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qpe_outcome_dist_statevector(0.3, M));
    }
}
BENCHMARK(BM_StatevectorQpe)->RangeMultiplier(2)->Range(4, 64);

void BM_SubgaussPareto(benchmark::State& state) {
    const QVar X(resolve_distribution("pareto:2.5:1:512"));
    const ConstantProfile& prof = calibrated_profile();
    RandomSource rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(subgauss_est(X, static_cast<double>(state.range(0)), 0.1, prof, rng));
    }
}
BENCHMARK(BM_SubgaussPareto)->RangeMultiplier(4)->Range(32, 2048)->Unit(benchmark::kMicrosecond);

void BM_SeqRelativeBernoulli(benchmark::State& state) {
    const QVar X(resolve_distribution("bernoulli:0.1"));
    const ConstantProfile& prof = calibrated_profile();
    RandomSource rng(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(seq_relative_est(X, 0.1, 0.1, prof, rng));
    }
}
BENCHMARK(BM_SeqRelativeBernoulli)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
