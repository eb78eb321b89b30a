// Command-line front end: simulate, batch, corners, obstacle, calibrate, field.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wormnav/errors.hpp"
#include "wormnav/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wormnav;

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> episodes;
    std::optional<std::string> noise;
    std::optional<std::string> strategy;
    std::string out_dir = "out";
    std::optional<int> parallel;
    double drift = 0.10;
    std::size_t grid = 101;
};

// "none", "salt_pepper" or a corruption probability.
NoiseModel parse_noise(const std::string& s, NoiseModel base) {
    if (s == "none") return {NoiseKind::none, base.corruption_probability, base.max_magnitude};
    if (s == "salt_pepper") return {NoiseKind::salt_pepper, base.corruption_probability, base.max_magnitude};
    try {
        std::size_t used = 0;
        const double p = std::stod(s, &used);
        if (used == s.size()) return {p > 0.0 ? NoiseKind::salt_pepper : NoiseKind::none, p, base.max_magnitude};
    } catch (const std::exception&) {
    }
    throw config_error("noise", "expected none, salt_pepper or a probability");
}

Strategy parse_strategy(const std::string& s) {
    if (s == "snn") return Strategy::snn;
    if (s == "graded") return Strategy::graded;
    if (s == "levy") return Strategy::levy;
    throw config_error("strategy", "expected snn, graded or levy");
}

ExperimentConfig build_config(const Options& o, bool obstacle) {
    ExperimentConfig c;
    if (!o.config_path.empty()) {
        c = load_experiment_config(o.config_path);
        if (obstacle && c.network.mode != NetworkMode::obstacle)
            throw config_error("mode", "obstacle subcommand needs an obstacle-mode config");
    } else if (obstacle) {
        c = ExperimentConfig::obstacle_defaults();
    }
    if (o.seed) c.seed = *o.seed;
    if (o.episodes) c.n_episodes = *o.episodes;
    if (o.noise) c.noise = parse_noise(*o.noise, c.noise);
    if (o.strategy) c.strategy = parse_strategy(*o.strategy);
    if (o.parallel) c.parallel = *o.parallel;
    c.validate();
    return c;
}

void write_json(const json& j, const fs::path& path) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

int cmd_simulate(const Options& o) {
    ExperimentConfig c = build_config(o, false);
    c.record_trajectory = true;
    c.record_raster = c.strategy == Strategy::snn;
    const RunMetrics m = run_episode(c, c.seed);
    const fs::path dir = o.out_dir;
    write_trajectory_csv(m.trajectory, dir / "trajectory.csv");
    if (c.record_raster) write_raster_csv(m.raster, dir / "raster.csv");
    json summary{{"seed", c.seed},
                 {"success", m.success},
                 {"time_to_target_s", m.time_to_target ? json(*m.time_to_target) : json(nullptr)},
                 {"dev_mean_mM", m.deviation_mean},
                 {"dev_std_mM", m.deviation_std},
                 {"path_length_mm", m.path_length},
                 {"reached_goal", m.reached_goal},
                 {"entered_avoid_region", m.entered_avoid_region}};
    write_json(summary, dir / "summary.json");
    std::cout << summary.dump() << '\n';
    return 0;
}

int run_and_export(const ExperimentConfig& c, const fs::path& dir, const std::string& stem) {
    const BatchResult r = run_batch_detailed(c);
    export_results(r.stats, r.runs, ExportFormat::csv, dir / (stem + "_episodes.csv"));
    export_results(r.stats, r.runs, ExportFormat::json, dir / (stem + ".json"));
    std::cout << to_json(r.stats).dump() << '\n';
    return 0;
}

int cmd_batch(const Options& o) { return run_and_export(build_config(o, false), o.out_dir, "batch"); }

int cmd_obstacle(const Options& o) { return run_and_export(build_config(o, true), o.out_dir, "obstacle"); }

int cmd_corners(const Options& o) {
    const ExperimentConfig c = build_config(o, false);
    const auto rows = corner_analysis(c, o.drift);
    json out = json::array();
    for (const auto& r : rows) {
        json s = to_json(r.stats);
        s["label"] = r.label;
        s["case"] = r.case_name;
        out.push_back(s);
        std::cout << r.label << (r.case_name.empty() ? "" : " (" + r.case_name + ")") << ": success "
                  << r.stats.success_rate << ", time " << r.stats.time_mean << " s, deviation "
                  << r.stats.deviation_mean << " mM\n";
    }
    write_json(out, fs::path(o.out_dir) / "corners.json");
    return 0;
}

int cmd_calibrate(const Options& o) {
    const ExperimentConfig c = build_config(o, false);
    const std::vector<double> gradients{0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
    const double vt = c.network.asel.spike_threshold;
    const std::vector<double> thresholds{vt - 0.2, vt, vt + 0.2};
    const fs::path dir = o.out_dir;
    const auto left = gradient_sweep(c.network.asel, gradients, thresholds, 10.0);
    const auto right = gradient_sweep(c.network.aser, gradients, thresholds, 10.0);
    write_calibration_csv(left, dir / "calibration_asel.csv");
    write_calibration_csv(right, dir / "calibration_aser.csv");
    json summary{{"asel_floor_mM_per_s", detection_floor(c.network.asel, 10.0)},
                 {"aser_floor_mM_per_s", detection_floor(c.network.aser, 10.0)}};
    std::cout << summary.dump() << '\n';
    return 0;
}

int cmd_field(const Options& o) {
    const ExperimentConfig c = build_config(o, false);
    const FieldGrid g = sample_grid(c.arena, o.grid, o.grid);
    write_grid_csv(g, fs::path(o.out_dir) / "field.csv");
    const double level = c.network.mode == NetworkMode::obstacle ? c.network.obstacle_avoid_level : c.network.set_point;
    std::cout << json{{"level_mM", level}, {"closed_contours", count_closed_contours(g, level)}}.dump() << '\n';
    return 0;
}

void print_error(const char* kind, const std::string& message, const std::string& field = {}) {
    json e{{"error", kind}, {"message", message}};
    if (!field.empty()) e["field"] = field;
    std::cerr << e.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiking chemotaxis circuit simulator"};
    app.require_subcommand(1);
    Options o;

    const auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON experiment config");
        sub->add_option("--seed", o.seed, "Base RNG seed");
        sub->add_option("--episodes", o.episodes, "Number of episodes");
        sub->add_option("--noise", o.noise, "none, salt_pepper or a corruption probability");
        sub->add_option("--strategy", o.strategy, "snn, graded or levy");
        sub->add_option("--out-dir", o.out_dir, "Output directory");
        sub->add_option("--parallel", o.parallel, "Concurrent episodes");
    };
    auto* simulate = app.add_subcommand("simulate", "Single episode with trajectory and spike raster");
    auto* batch = app.add_subcommand("batch", "Monte-Carlo batch of episodes");
    auto* corners = app.add_subcommand("corners", "Weight-drift corner analysis");
    auto* obstacle = app.add_subcommand("obstacle", "Obstacle-avoidance batch");
    auto* calibrate = app.add_subcommand("calibrate", "Detector frequency versus gradient sweep");
    auto* field = app.add_subcommand("field", "Arena grid export");
    for (auto* s : {simulate, batch, corners, obstacle, calibrate, field}) add_common(s);
    corners->add_option("--drift", o.drift, "Weight drift fraction")->check(CLI::Range(0.0, 0.99));
    field->add_option("--grid", o.grid, "Samples per axis")->check(CLI::Range(2, 10000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*simulate) return cmd_simulate(o);
        if (*batch) return cmd_batch(o);
        if (*corners) return cmd_corners(o);
        if (*obstacle) return cmd_obstacle(o);
        if (*calibrate) return cmd_calibrate(o);
        if (*field) return cmd_field(o);
    } catch (const config_error& e) {
        print_error("config_error", e.what(), e.field());
        return 2;
    } catch (const calibration_error& e) {
        print_error("calibration_error", e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("runtime_error", e.what());
        return 1;
    }
    return 0;
}
