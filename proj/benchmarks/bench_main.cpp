#include <benchmark/benchmark.h>

#include "stratcls/case_study.hpp"
#include "stratcls/complete_info.hpp"
#include "stratcls/incomplete_info.hpp"
#include "stratcls/numerics.hpp"
#include "stratcls/rng.hpp"

using namespace stratcls;

namespace {

CausalGraph random_dag(Rng& rng, std::size_t d) {
    std::vector<Feature> features;
    for (std::size_t i = 0; i < d; ++i)
        features.push_back({"f" + std::to_string(i), i < d / 2});
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (rng.uniform() < 0.5) edges.push_back({i, j, rng.uniform(-1.0, 1.0)});
    return CausalGraph(std::move(features), std::move(edges));
}

Matrix random_psd(Rng& rng, std::size_t d, double ridge) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    Matrix s = m * m.transposed();
    for (std::size_t i = 0; i < d; ++i) s(i, i) += ridge;
    return s;
}

void BM_ContributionMatrix(benchmark::State& state) {
    Rng rng(1);
    const CausalGraph graph = random_dag(rng, state.range(0));
    const Matrix a = graph.adjacency_matrix();
    for (auto _ : state) benchmark::DoNotOptimize(contribution_matrix(a));
}
BENCHMARK(BM_ContributionMatrix)->Arg(8)->Arg(32)->Arg(64);

void BM_PsdSqrt(benchmark::State& state) {
    Rng rng(2);
    const Matrix m = random_psd(rng, state.range(0), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(psd_sqrt(m));
}
BENCHMARK(BM_PsdSqrt)->Arg(8)->Arg(16);

void BM_NormalQuantile(benchmark::State& state) {
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(std_normal_quantile(rng.uniform(1e-9, 1.0 - 1e-9)));
}
BENCHMARK(BM_NormalQuantile);

void BM_ChanceL2Cvd(benchmark::State& state) {
    const CausalGraph graph = build_cvd_graph();
    const Matrix c = contribution_matrix(graph.adjacency_matrix());
    const ContributionBelief belief = belief_model1(c, build_classifier_prior("DM", 0.5));
    for (auto _ : state) benchmark::DoNotOptimize(best_response_chance_l2(belief, 1.0, 0.1));
}
BENCHMARK(BM_ChanceL2Cvd);

void BM_ChanceL1Enumeration(benchmark::State& state) {
    Rng rng(4);
    const std::size_t d = state.range(0);
    ContributionBelief belief;
    belief.sigma = random_psd(rng, d, 0.1);
    belief.mu = Vector(d, 1.0);
    const Vector weights(d, 1.0);
    const double delta = 0.45;
    for (auto _ : state)
        benchmark::DoNotOptimize(best_response_chance_l1(belief, weights, 1.0, delta));
}
BENCHMARK(BM_ChanceL1Enumeration)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
    SweepConfig config = SweepConfig::defaults();
    config.alphas = {1.0};
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(config));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
