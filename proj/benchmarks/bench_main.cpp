#include <benchmark/benchmark.h>

#include <filesystem>
#include <vector>

#include "wormnav/experiment.hpp"
#include "wormnav/io.hpp"
#include "wormnav/network.hpp"

using namespace wormnav;

namespace {

// One 1 ms neural step of the full tracking network on a slowly varying reading.
void BM_NetworkStep(benchmark::State& state) {
    const NetworkConfig cfg = NetworkConfig::tracking_defaults();
    NetworkState s = NetworkState::initial(cfg, 40.0, 1e-3);
    double c = 40.0;
    for (auto _ : state) {
        c = c < 70.0 ? c + 1e-3 : 40.0;
        benchmark::DoNotOptimize(network_advance(s, cfg, c, 1e-3));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NetworkStep);

// Full 1500 s episode with the two-rate stepping scheme.
void BM_Episode(benchmark::State& state) {
    ExperimentConfig cfg = ExperimentConfig::tracking_defaults();
    cfg.strategy = static_cast<Strategy>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_episode(cfg, seed++));
}
BENCHMARK(BM_Episode)
    ->Arg(static_cast<int>(Strategy::snn))
    ->Arg(static_cast<int>(Strategy::graded))
    ->Arg(static_cast<int>(Strategy::levy))
    ->Unit(benchmark::kMillisecond);

std::vector<TrajectoryRow> synthetic_trajectory(std::size_t n) {
    std::vector<TrajectoryRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = 0.1 * static_cast<double>(i + 1);
        rows[i] = {t, 20.0 + 0.01 * t, 20.0 + 0.02 * t, 0.5, 0.3, 40.0 + 1e-3 * t};
    }
    return rows;
}

// CSV export of an episode-length trajectory.
void BM_TrajectoryCsv(benchmark::State& state) {
    const auto rows = synthetic_trajectory(static_cast<std::size_t>(state.range(0)));
    const auto path = std::filesystem::temp_directory_path() / "wormnav_bench_trajectory.csv";
    for (auto _ : state) write_trajectory_csv(rows, path);
    state.SetItemsProcessed(state.iterations() * state.range(0));
    std::filesystem::remove(path);
}
BENCHMARK(BM_TrajectoryCsv)->Arg(15000)->Unit(benchmark::kMillisecond);

// Batch statistics over a 200-episode batch.
void BM_Aggregate(benchmark::State& state) {
    std::vector<RunMetrics> runs(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < runs.size(); ++i) {
        auto& r = runs[i];
        r.success = i % 10 != 0;
        if (r.success) r.time_to_target = 100.0 + static_cast<double>(i);
        r.tracking_samples = 5000;
        r.deviation_sum = 0.6 * 5000;
        r.deviation_sq_sum = 0.5 * 5000;
    }
    for (auto _ : state) benchmark::DoNotOptimize(aggregate(runs, 60.0));
}
BENCHMARK(BM_Aggregate)->Arg(200)->Arg(20000);

} // namespace

// Own main: the packaged benchmark_main archive carries LTO bytecode from another compiler release.
BENCHMARK_MAIN();
