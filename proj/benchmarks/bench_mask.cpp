#include <benchmark/benchmark.h>

#include <random>

#include "wavemask/mask.hpp"
#include "wavemask/microdata.hpp"

namespace {

const std::vector<double> kCounts = {19, 12, 153, 71, 13, 79, 7, 33, 16, 270, 812, 135, 241, 14, 60, 4337};

wavemask::MaskingConfig census_config(bool with_override) {
    wavemask::MaskingConfig cfg;
    cfg.level = 2;
    std::vector<wavemask::GoalSpec::Entry> entries;
    for (std::size_t i : {1, 2, 3, 14, 15, 16}) entries.push_back({i, wavemask::Goal::lower()});
    for (std::size_t i = 5; i <= 10; ++i) entries.push_back({i, wavemask::Goal::raise()});
    cfg.goals = wavemask::GoalSpec::from_entries(16, entries);
    if (with_override) {
        cfg.override_coeffs = std::vector<double>{0, 379.097, 31805.084, 5464.854};
        cfg.offset = wavemask::OffsetPolicy::fixed(2500.0);
        cfg.sum_repair = false;
    }
    return cfg;
}

void BM_MaskSignal(benchmark::State& state) {
    const wavemask::Signal q(kCounts);
    const auto cfg = census_config(state.range(0) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(wavemask::mask_signal(q, cfg));
}
BENCHMARK(BM_MaskSignal)->Arg(0)->Arg(1);

void BM_PlanResynthesis(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<std::string> areas = {"01", "02", "03", "04", "05", "06", "07", "08"};
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, areas.size() - 1);
    std::vector<std::vector<std::string>> recs;
    for (std::size_t i = 0; i < n; ++i) recs.push_back({std::to_string(i), i % 3 == 0 ? "1" : "0", areas[pick(rng)]});
    const wavemask::MicrofileTable table({"id", "vital", "area"}, std::move(recs));
    const wavemask::SelectionSpec spec{{"vital"}, {"1"}, "area", areas};
    const auto q = wavemask::extract_quantity_signal(table, spec);
    std::vector<std::int64_t> q_tilde(areas.size(), 0);
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(q.sum()); ++k) ++q_tilde[static_cast<std::size_t>(k) % areas.size()];
    for (auto _ : state) {
        const auto plan = wavemask::plan_resynthesis(table, spec, q, q_tilde, 42);
        benchmark::DoNotOptimize(wavemask::apply_plan(table, plan));
    }
}
BENCHMARK(BM_PlanResynthesis)->Arg(1000)->Arg(100000);

}  // namespace
