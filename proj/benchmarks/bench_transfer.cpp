// Dense T1(l) construction against the matrix-free apply on seeded chains.
// The dense column build stops at N = 7; beyond that only the free path runs.

#include <benchmark/benchmark.h>

#include "sovlab/chain.hpp"
#include "sovlab/gl3_model.hpp"
#include "sovlab/sampler.hpp"

namespace {

using namespace sovlab;

struct Setup {
    ChainData chain;
    cplx lambda;
    CVector v;

    explicit Setup(int n) {
        Sampler s(7);
        const ModelParams p = s.draw_params(n);
        chain = p.chain();
        lambda = p.xi.front() + cplx(0.3125, 0.1875);
        v = CVector::Ones(static_cast<Eigen::Index>(p.dim()));
    }
};

void BM_DenseTransfer(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        CMatrix t = chain_transfer_columns(s.chain, 1, s.lambda);
        benchmark::DoNotOptimize(t.data());
    }
    state.counters["dim"] = static_cast<double>(s.chain.dim());
}

void BM_MatrixFreeApply(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        CVector y = chain_apply_transfer(s.chain, 1, s.lambda, s.v);
        benchmark::DoNotOptimize(y.data());
    }
    state.counters["dim"] = static_cast<double>(s.chain.dim());
    state.SetItemsProcessed(state.iterations());
}

void BM_DenseApply(benchmark::State& state) {
    const Setup s(static_cast<int>(state.range(0)));
    const CMatrix t = chain_transfer_columns(s.chain, 1, s.lambda);
    for (auto _ : state) {
        CVector y = t * s.v;
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_DenseTransfer)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseApply)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixFreeApply)->DenseRange(4, 9)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
