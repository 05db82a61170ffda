#include <benchmark/benchmark.h>

#include <random>

#include "wavemask/wavelet.hpp"
#include "wavemask/wrm.hpp"

namespace {

wavemask::Signal random_signal(std::size_t n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.0, 1000.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return wavemask::Signal(v);
}

void BM_Decompose(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto signal = random_signal(n);
    const auto filters = wavemask::make_filter(wavemask::WaveletFamily::Daubechies, static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(wavemask::decompose(signal, filters, 3));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Decompose)->ArgsProduct({{64, 1024, 16384}, {1, 2, 4}});

void BM_BuildWrm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto filters = wavemask::make_filter(wavemask::WaveletFamily::Daubechies, 2);
    for (auto _ : state) benchmark::DoNotOptimize(wavemask::build_wrm(n, 2, filters));
}
BENCHMARK(BM_BuildWrm)->Arg(16)->Arg(64)->Arg(256);

void BM_MakeFilter(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            wavemask::make_filter(wavemask::WaveletFamily::Daubechies, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_MakeFilter)->DenseRange(3, 10, 7);

}  // namespace
