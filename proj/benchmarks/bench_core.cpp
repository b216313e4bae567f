#include "wpcvi/fcm.hpp"
#include "wpcvi/pearson.hpp"
#include "wpcvi/reference_indexes.hpp"
#include "wpcvi/rng.hpp"
#include "wpcvi/wp_index.hpp"

#include <benchmark/benchmark.h>

using namespace wpcvi;

namespace {

DataMatrix blobs(int n, int p, std::uint64_t seed) {
    Rng rng(seed);
    Matrix x(n, p);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < p; ++k) x(i, k) = rng.normal() + 6.0 * (i % 3 == k % 3);
    }
    return DataMatrix(std::move(x));
}

FcmModel fitted(const DataMatrix& data, int c) {
    FcmOptions opts;
    opts.restarts = 1;
    return fit_fcm(data, c, 2.0, opts);
}

void BM_FitFcm(benchmark::State& state) {
    const DataMatrix data = blobs(static_cast<int>(state.range(0)), 2, 1);
    FcmOptions opts;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_fcm(data, static_cast<int>(state.range(1)), 2.0, opts).objective);
        ++opts.seed;
    }
}
BENCHMARK(BM_FitFcm)->Args({600, 3})->Args({600, 10})->Args({9600, 5})->Unit(benchmark::kMillisecond);

void BM_Wpc(benchmark::State& state) {
    const DataMatrix data = blobs(static_cast<int>(state.range(0)), 3, 2);
    const FcmModel model = fitted(data, 4);
    WpConfig config;
    config.threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(wpc(data, model, config).value);
    state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}
BENCHMARK(BM_Wpc)->Args({600, 1})->Args({2000, 1})->Args({2000, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_PairwiseCorrelation(benchmark::State& state) {
    const DataMatrix a = blobs(static_cast<int>(state.range(0)), 3, 3);
    const DataMatrix b = blobs(static_cast<int>(state.range(0)), 3, 4);
    for (auto _ : state) benchmark::DoNotOptimize(pairwise_distance_correlation(a.points(), b.points()).value);
    state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}
BENCHMARK(BM_PairwiseCorrelation)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_GeneralizedC(benchmark::State& state) {
    const DataMatrix data = blobs(static_cast<int>(state.range(0)), 2, 5);
    const FcmModel model = fitted(data, 3);
    for (auto _ : state) benchmark::DoNotOptimize(gc(data, model));
}
BENCHMARK(BM_GeneralizedC)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_Xb(benchmark::State& state) {
    const DataMatrix data = blobs(static_cast<int>(state.range(0)), 2, 6);
    const FcmModel model = fitted(data, 3);
    for (auto _ : state) benchmark::DoNotOptimize(xb(data, model));
}
BENCHMARK(BM_Xb)->Arg(600)->Arg(9600)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
