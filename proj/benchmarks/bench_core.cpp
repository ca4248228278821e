#include <benchmark/benchmark.h>

#include "fidelim/bounds.hpp"
#include "fidelim/evolution.hpp"
#include "fidelim/model.hpp"
#include "fidelim/rng.hpp"

using namespace fidelim;

static void BM_eig2(benchmark::State& state) {
    rng::Gaussian g(1);
    const Hermitian2 h(g(), g(), g(), g());
    for (auto _ : state) {
        benchmark::DoNotOptimize(eig2(h));
    }
}
BENCHMARK(BM_eig2);

static void BM_expu2(benchmark::State& state) {
    rng::Gaussian g(2);
    const Hermitian2 h(g(), g(), g(), g());
    for (auto _ : state) {
        benchmark::DoNotOptimize(expu2(h, 0.01));
    }
}
BENCHMARK(BM_expu2);

static void BM_evolve_mode(benchmark::State& state) {
    ModelParams p;
    p.N = 1;
    const DriveProtocol protocol = DriveProtocol::uniform(1.5, 256);
    IntegratorConfig cfg;
    cfg.base_steps = static_cast<std::size_t>(state.range(0));
    cfg.max_halvings = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_mode(p, 0.3, protocol, cfg));
    }
}
BENCHMARK(BM_evolve_mode)->Arg(2048)->Arg(8192);

static void BM_oc_exact(benchmark::State& state) {
    ModelParams p;
    p.N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(oc_exact(p, 0.05));
    }
}
BENCHMARK(BM_oc_exact)->Arg(1000)->Arg(100000);

static void BM_lemma_trials(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(lemma_s2_check(42, 1000, {2, 3, 4, 5, 6, 7, 8}));
    }
}
BENCHMARK(BM_lemma_trials);

BENCHMARK_MAIN();
