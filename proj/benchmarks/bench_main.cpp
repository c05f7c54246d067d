#include <benchmark/benchmark.h>

#include <vector>

#include "anovakit/anova.hpp"
#include "anovakit/distributions.hpp"
#include "anovakit/oracle.hpp"
#include "anovakit/rng.hpp"

using namespace anovakit;

namespace {

Dataset make_dataset(const Layout& layout, std::uint64_t seed) {
    GaussianSampler g(seed);
    std::vector<double> values(static_cast<std::size_t>(layout.total()));
    for (double& v : values) v = g.next();
    return Dataset(layout, std::move(values));
}

void BM_GaussianSampler(benchmark::State& state) {
    GaussianSampler g(1);
    for (auto _ : state) benchmark::DoNotOptimize(g.next());
}
BENCHMARK(BM_GaussianSampler);

void BM_UpperTailF(benchmark::State& state) {
    const FDist law(3, 12);
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(upper_tail(law, x));
        x = x < 8.0 ? x + 0.25 : 0.5; // sweep the support
    }
}
BENCHMARK(BM_UpperTailF);

void BM_AlphaPointF(benchmark::State& state) {
    const FDist law(3, 12);
    for (auto _ : state) benchmark::DoNotOptimize(alpha_point(law, 0.05).value);
}
BENCHMARK(BM_AlphaPointF);

void BM_AlphaPointT(benchmark::State& state) {
    const StudentT law(7);
    for (auto _ : state) benchmark::DoNotOptimize(alpha_point(law, 0.025).value);
}
BENCHMARK(BM_AlphaPointT);

void BM_QuadratureTail(benchmark::State& state) {
    const DistributionModel law{FDist(3, 7)};
    for (auto _ : state) benchmark::DoNotOptimize(quadrature_tail(law, 2.5));
}
BENCHMARK(BM_QuadratureTail);

void BM_FStatisticOneWay(benchmark::State& state) {
    const Layout layout = Layout::one_way(
        std::vector<int>(static_cast<std::size_t>(state.range(0)), 8));
    const Dataset x = make_dataset(layout, 42);
    for (auto _ : state) benchmark::DoNotOptimize(f_statistic(TestKind::OneWayEqualMeans, x).value);
}
BENCHMARK(BM_FStatisticOneWay)->Arg(3)->Arg(10)->Arg(30);

void BM_FStatisticInteraction(benchmark::State& state) {
    const Layout layout = Layout::two_way(4, 5, static_cast<int>(state.range(0)));
    const Dataset x = make_dataset(layout, 43);
    for (auto _ : state)
        benchmark::DoNotOptimize(f_statistic(TestKind::TwoWayInteraction, x).value);
}
BENCHMARK(BM_FStatisticInteraction)->Arg(4)->Arg(16);

void BM_RunTest(benchmark::State& state) {
    const Layout layout = Layout::one_way({4, 5, 6});
    const Dataset x = make_dataset(layout, 44);
    const TestSpec spec{TestKind::OneWayEqualMeans, layout, 0.05, std::nullopt};
    for (auto _ : state) benchmark::DoNotOptimize(run_test(spec, x).statistic);
}
BENCHMARK(BM_RunTest);

void BM_SimulateStatistic(benchmark::State& state) {
    const SimPlan plan{State({0, 0, 0}, 1.0), Layout::one_way({5, 5, 5}),
                       TestKind::OneWayEqualMeans, state.range(0), 7};
    for (auto _ : state) benchmark::DoNotOptimize(simulate_statistic(plan).empirical_tail);
    state.SetItemsProcessed(state.iterations() * plan.replicates);
}
BENCHMARK(BM_SimulateStatistic)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
