#include <benchmark/benchmark.h>

#include <random>

#include "phidiv/inference.hpp"
#include "phidiv/measures.hpp"
#include "phidiv/montecarlo.hpp"

using namespace phidiv;

namespace {

std::pair<ProbabilityVector, ProbabilityVector> pair_of_size(std::size_t r) {
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < r; ++j) labels.push_back("x" + std::to_string(j));
    auto s = make_support(labels);
    std::mt19937_64 rng(r);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> a(r), b(r);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    return {ProbabilityVector::from_weights(s, a), ProbabilityVector::from_weights(s, b)};
}

}  // namespace

static void BM_Divergence(benchmark::State& state) {
    auto [p, q] = pair_of_size(state.range(0));
    const auto kind = MeasureKind::renyi(0.99, true);
    for (auto _ : state) benchmark::DoNotOptimize(divergence(kind, p, q));
}
BENCHMARK(BM_Divergence)->Arg(3)->Arg(64)->Arg(4096);

static void BM_JFunctional(benchmark::State& state) {
    auto [p, q] = pair_of_size(state.range(0));
    const auto spec = phi_spec_for(MeasureKind::kl());
    for (auto _ : state) benchmark::DoNotOptimize(j_functional(p, q, spec));
}
BENCHMARK(BM_JFunctional)->Arg(3)->Arg(64)->Arg(4096);

static void BM_EstimateTwoSample(benchmark::State& state) {
    auto [p, q] = pair_of_size(state.range(0));
    const auto kind = MeasureKind::kl(true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_from_pmfs(kind, Mode::two_sample, p, q, 1000, 1000));
    }
}
BENCHMARK(BM_EstimateTwoSample)->Arg(3)->Arg(64)->Arg(4096);

static void BM_SampleCounts(benchmark::State& state) {
    auto [p, q] = pair_of_size(3);
    CategoricalSampler sampler(p);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sampler.sample_counts(state.range(0), ++seed));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleCounts)->Arg(100)->Arg(20000);

static void BM_SimulationCell(benchmark::State& state) {
    auto cfg = reference_config();
    cfg.measures = {MeasureKind::kl()};
    cfg.sizes = {static_cast<std::size_t>(state.range(0))};
    cfg.replications = 100;
    cfg.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}
BENCHMARK(BM_SimulationCell)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
