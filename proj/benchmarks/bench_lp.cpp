#include <benchmark/benchmark.h>

#include <random>

#include "wavemask/lp.hpp"

namespace {

wavemask::LinearProgram random_lp(std::size_t n, std::size_t m) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    wavemask::LinearProgram lp;
    lp.num_vars = n;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> a(n);
        for (auto& v : a) v = d(rng);
        lp.rows.push_back({a, wavemask::Relation::LessEqual, 1.0 + d(rng) * 0.5, {}});
    }
    lp.bounds.assign(n, wavemask::VariableBounds{-10.0, 10.0});
    std::vector<double> c(n);
    for (auto& v : c) v = d(rng);
    lp.objective = wavemask::Objective{c, wavemask::Sense::Maximize};
    return lp;
}

void BM_Solve(benchmark::State& state) {
    const auto lp = random_lp(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const auto mode = state.range(2) == 0 ? wavemask::SolveMode::Feasibility : wavemask::SolveMode::Optimize;
    for (auto _ : state) benchmark::DoNotOptimize(wavemask::solve(lp, mode));
}
BENCHMARK(BM_Solve)->Args({4, 12, 0})->Args({4, 12, 1})->Args({16, 64, 1})->Args({32, 128, 1});

}  // namespace
