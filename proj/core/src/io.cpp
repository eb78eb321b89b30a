#include "wormnav/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "wormnav/errors.hpp"

namespace wormnav {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << std::setprecision(10);
    return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Reads `key` of `obj` into `out` if present; type mismatches become
// config errors carrying the dotted field path.
template <class T>
void read(const json& obj, const char* key, const std::string& prefix, T& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    const std::string field = prefix.empty() ? key : prefix + "." + key;
    try {
        out = it->template get<T>();
    } catch (const json::exception&) {
        throw config_error(field, "wrong type");
    }
}

const json* section(const json& obj, const char* key, const std::string& prefix) {
    const auto it = obj.find(key);
    if (it == obj.end()) return nullptr;
    if (!it->is_object()) throw config_error(prefix.empty() ? key : prefix + "." + key, "expected an object");
    return &*it;
}

void read_vec2(const json& obj, const char* key, const std::string& field, Vec2& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
        throw config_error(field, "expected [x, y]");
    out = {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

void read_lif(const json& obj, const char* key, const std::string& prefix, LifParams& p) {
    const json* s = section(obj, key, prefix);
    if (!s) return;
    const std::string f = prefix + "." + key;
    read(*s, "capacitance", f, p.capacitance);
    read(*s, "leak_conductance", f, p.leak_conductance);
    read(*s, "rest_potential", f, p.rest_potential);
    read(*s, "threshold", f, p.threshold);
    read(*s, "spike_value", f, p.spike_value);
}

void read_kernel(const json& obj, const char* key, const std::string& prefix, SynapseKernelParams& k) {
    const json* s = section(obj, key, prefix);
    if (!s) return;
    const std::string f = prefix + "." + key;
    read(*s, "peak_scale", f, k.peak_scale);
    read(*s, "tau_slow", f, k.tau_slow);
    read(*s, "tau_fast", f, k.tau_fast);
}

void read_ase(const json& obj, const char* key, const std::string& prefix, AseParams& p) {
    const json* s = section(obj, key, prefix);
    if (!s) return;
    const std::string f = prefix + "." + key;
    read(*s, "tau_m", f, p.tau_m);
    read(*s, "rest_potential", f, p.rest_potential);
    read(*s, "reversal_depol", f, p.reversal_depol);
    read(*s, "reversal_hyper", f, p.reversal_hyper);
    read(*s, "g_max", f, p.g_max);
    read(*s, "beta_d", f, p.beta_d);
    read(*s, "gamma_d", f, p.gamma_d);
    read(*s, "delta_d", f, p.delta_d);
    read(*s, "beta_h", f, p.beta_h);
    read(*s, "alpha0_d", f, p.alpha0_d);
    read(*s, "alpha0_h", f, p.alpha0_h);
    read(*s, "eta_r", f, p.eta_r);
    read(*s, "tau_adapt", f, p.tau_adapt);
    read(*s, "nacl_r_min", f, p.nacl_r_min);
    read(*s, "spike_threshold", f, p.spike_threshold);
    read(*s, "spike_value", f, p.spike_value);
}

void read_network(const json& s, NetworkConfig& n) {
    const std::string f = "network";
    read(s, "set_point", f, n.set_point);
    read(s, "i_app0", f, n.i_app0);
    read(s, "bias5", f, n.bias5);
    read(s, "bias6", f, n.bias6);
    read(s, "bias7", f, n.bias7);
    read(s, "obstacle_avoid_level", f, n.obstacle_avoid_level);
    read(s, "obstacle_goal_level", f, n.obstacle_goal_level);
    if (const json* w = section(s, "weights", f)) {
        const std::string g = "network.weights";
        read(*w, "w15", g, n.weights.w15);
        read(*w, "w35", g, n.weights.w35);
        read(*w, "w26", g, n.weights.w26);
        read(*w, "w46", g, n.weights.w46);
        read(*w, "w17", g, n.weights.w17);
        read(*w, "w27", g, n.weights.w27);
        read(*w, "w37", g, n.weights.w37);
        read(*w, "w47", g, n.weights.w47);
        read(*w, "w57", g, n.weights.w57);
    }
    read_lif(s, "comparator_lif", f, n.comparator_lif);
    read_lif(s, "coincidence_lif", f, n.coincidence_lif);
    read_lif(s, "explorer_lif", f, n.explorer_lif);
    read_kernel(s, "comparator_kernel", f, n.comparator_kernel);
    read_kernel(s, "detector_kernel", f, n.detector_kernel);
    read_ase(s, "asel", f, n.asel);
    read_ase(s, "aser", f, n.aser);

    // Coincidence biases are tuned to the neuron and kernels; when those
    // change and no bias is given, recalibrate. Weight edits keep the bias,
    // as in the drift experiments.
    const bool retuned =
        s.contains("coincidence_lif") || s.contains("comparator_kernel") || s.contains("detector_kernel");
    if (!retuned) return;
    try {
        if (!s.contains("bias5"))
            n.bias5 = calibrate_coincidence_bias(n.coincidence_lif, n.comparator_kernel, n.detector_kernel,
                                                 n.weights.w15, n.weights.w35);
        if (!s.contains("bias6") && n.mode == NetworkMode::tracking)
            n.bias6 = calibrate_coincidence_bias(n.coincidence_lif, n.comparator_kernel, n.detector_kernel,
                                                 n.weights.w26, n.weights.w46);
    } catch (const calibration_error& e) {
        throw config_error("network.bias5", e.what());
    }
}

void read_arena(const json& s, ScalarField& a) {
    read(s, "baseline", "arena", a.baseline);
    if (const json* b = section(s, "bounds", "arena")) {
        read(*b, "x_min", "arena.bounds", a.bounds.x_min);
        read(*b, "y_min", "arena.bounds", a.bounds.y_min);
        read(*b, "x_max", "arena.bounds", a.bounds.x_max);
        read(*b, "y_max", "arena.bounds", a.bounds.y_max);
    }
    const auto it = s.find("bumps");
    if (it == s.end()) return;
    if (!it->is_array()) throw config_error("arena.bumps", "expected an array");
    a.bumps.clear();
    for (std::size_t i = 0; i < it->size(); ++i) {
        const json& e = (*it)[i];
        const std::string f = "arena.bumps[" + std::to_string(i) + "]";
        if (!e.is_object()) throw config_error(f, "expected an object");
        Bump b{{0.0, 0.0}, 0.0, 1.0};
        if (!e.contains("center") || !e.contains("amplitude") || !e.contains("width"))
            throw config_error(f, "needs center, amplitude and width");
        read_vec2(e, "center", f + ".center", b.center);
        read(e, "amplitude", f, b.amplitude);
        read(e, "width", f, b.width);
        a.bumps.push_back(b);
    }
}

Strategy parse_strategy(const std::string& s) {
    if (s == "snn") return Strategy::snn;
    if (s == "graded") return Strategy::graded;
    if (s == "levy") return Strategy::levy;
    throw config_error("strategy", "expected snn, graded or levy");
}

const char* strategy_name(Strategy s) {
    switch (s) {
    case Strategy::snn: return "snn";
    case Strategy::graded: return "graded";
    case Strategy::levy: return "levy";
    }
    return "snn";
}

} // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
    if (!j.is_object()) throw config_error("<root>", "expected a JSON object");
    std::string mode = "tracking";
    read(j, "mode", "", mode);
    ExperimentConfig c;
    if (mode == "obstacle") {
        c = ExperimentConfig::obstacle_defaults();
    } else if (mode != "tracking") {
        throw config_error("mode", "expected tracking or obstacle");
    }
    if (const json* n = section(j, "network", "")) {
        read_network(*n, c.network);
    }
    if (const json* a = section(j, "arena", "")) read_arena(*a, c.arena);
    if (const json* k = section(j, "kinematics", "")) {
        read(*k, "v_explore", "kinematics", c.kinematics.v_explore);
        read(*k, "v_track", "kinematics", c.kinematics.v_track);
        read(*k, "fixed_turn_deg", "kinematics", c.kinematics.fixed_turn_deg);
        read(*k, "random_turn_halfwidth_deg", "kinematics", c.kinematics.random_turn_halfwidth_deg);
    }
    if (const json* l = section(j, "levy", "")) {
        read(*l, "s_min", "levy", c.levy.s_min);
        read(*l, "s_max", "levy", c.levy.s_max);
        read(*l, "exponent", "levy", c.levy.exponent);
        read(*l, "speed", "levy", c.levy.speed);
    }
    if (const json* g = section(j, "graded", "")) {
        read(*g, "comparator_scale", "graded", c.graded.comparator_scale);
        read(*g, "detector_scale", "graded", c.graded.detector_scale);
        read(*g, "gain", "graded", c.graded.gain);
        read(*g, "bias5", "graded", c.graded.bias5);
        read(*g, "bias6", "graded", c.graded.bias6);
        read(*g, "bias7", "graded", c.graded.bias7);
        read(*g, "tau_activity", "graded", c.graded.tau_activity);
        read(*g, "decision_level", "graded", c.graded.decision_level);
        read(*g, "decision_interval", "graded", c.graded.decision_interval);
    }
    if (const json* n = section(j, "noise", "")) {
        std::string kind = c.noise.kind == NoiseKind::none ? "none" : "salt_pepper";
        read(*n, "kind", "noise", kind);
        if (kind == "none") c.noise.kind = NoiseKind::none;
        else if (kind == "salt_pepper") c.noise.kind = NoiseKind::salt_pepper;
        else throw config_error("noise.kind", "expected none or salt_pepper");
        read(*n, "corruption_probability", "noise", c.noise.corruption_probability);
        read(*n, "max_magnitude", "noise", c.noise.max_magnitude);
    }
    if (j.contains("strategy")) {
        std::string s;
        read(j, "strategy", "", s);
        c.strategy = parse_strategy(s);
    }
    read_vec2(j, "start", "start", c.start);
    read(j, "episode_duration", "", c.episode_duration);
    read(j, "n_episodes", "", c.n_episodes);
    read(j, "success_tolerance", "", c.success_tolerance);
    read(j, "behavior_dt", "", c.behavior_dt);
    read(j, "neural_dt", "", c.neural_dt);
    read(j, "seed", "", c.seed);
    read(j, "parallel", "", c.parallel);
    read(j, "concentration_range", "", c.concentration_range);
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config", "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error("config", std::string("malformed JSON: ") + e.what());
    }
    return experiment_config_from_json(j);
}

json to_json(const ExperimentConfig& c) {
    const auto lif = [](const LifParams& p) {
        return json{{"capacitance", p.capacitance}, {"leak_conductance", p.leak_conductance},
                    {"rest_potential", p.rest_potential}, {"threshold", p.threshold}, {"spike_value", p.spike_value}};
    };
    const auto kernel = [](const SynapseKernelParams& k) {
        return json{{"peak_scale", k.peak_scale}, {"tau_slow", k.tau_slow}, {"tau_fast", k.tau_fast}};
    };
    const auto ase = [](const AseParams& p) {
        return json{{"tau_m", p.tau_m},         {"rest_potential", p.rest_potential},
                    {"reversal_depol", p.reversal_depol}, {"reversal_hyper", p.reversal_hyper},
                    {"g_max", p.g_max},         {"beta_d", p.beta_d},
                    {"gamma_d", p.gamma_d},     {"delta_d", p.delta_d},
                    {"beta_h", p.beta_h},       {"alpha0_d", p.alpha0_d},
                    {"alpha0_h", p.alpha0_h},   {"eta_r", p.eta_r},
                    {"tau_adapt", p.tau_adapt}, {"nacl_r_min", p.nacl_r_min},
                    {"spike_threshold", p.spike_threshold}, {"spike_value", p.spike_value}};
    };
    const NetworkConfig& n = c.network;
    json bumps = json::array();
    for (const auto& b : c.arena.bumps)
        bumps.push_back({{"center", {b.center.x, b.center.y}}, {"amplitude", b.amplitude}, {"width", b.width}});
    return json{
        {"mode", n.mode == NetworkMode::obstacle ? "obstacle" : "tracking"},
        {"strategy", strategy_name(c.strategy)},
        {"seed", c.seed},
        {"n_episodes", c.n_episodes},
        {"episode_duration", c.episode_duration},
        {"success_tolerance", c.success_tolerance},
        {"behavior_dt", c.behavior_dt},
        {"neural_dt", c.neural_dt},
        {"parallel", c.parallel},
        {"concentration_range", c.concentration_range},
        {"start", {c.start.x, c.start.y}},
        {"noise",
         {{"kind", c.noise.kind == NoiseKind::none ? "none" : "salt_pepper"},
          {"corruption_probability", c.noise.corruption_probability},
          {"max_magnitude", c.noise.max_magnitude}}},
        {"arena",
         {{"baseline", c.arena.baseline},
          {"bounds",
           {{"x_min", c.arena.bounds.x_min},
            {"y_min", c.arena.bounds.y_min},
            {"x_max", c.arena.bounds.x_max},
            {"y_max", c.arena.bounds.y_max}}},
          {"bumps", bumps}}},
        {"kinematics",
         {{"v_explore", c.kinematics.v_explore},
          {"v_track", c.kinematics.v_track},
          {"fixed_turn_deg", c.kinematics.fixed_turn_deg},
          {"random_turn_halfwidth_deg", c.kinematics.random_turn_halfwidth_deg}}},
        {"levy",
         {{"s_min", c.levy.s_min}, {"s_max", c.levy.s_max}, {"exponent", c.levy.exponent}, {"speed", c.levy.speed}}},
        {"graded",
         {{"comparator_scale", c.graded.comparator_scale},
          {"detector_scale", c.graded.detector_scale},
          {"gain", c.graded.gain},
          {"bias5", c.graded.bias5},
          {"bias6", c.graded.bias6},
          {"bias7", c.graded.bias7},
          {"tau_activity", c.graded.tau_activity},
          {"decision_level", c.graded.decision_level},
          {"decision_interval", c.graded.decision_interval}}},
        {"network",
         {{"set_point", n.set_point},
          {"i_app0", n.i_app0},
          {"bias5", n.bias5},
          {"bias6", n.bias6},
          {"bias7", n.bias7},
          {"obstacle_avoid_level", n.obstacle_avoid_level},
          {"obstacle_goal_level", n.obstacle_goal_level},
          {"weights",
           {{"w15", n.weights.w15},
            {"w35", n.weights.w35},
            {"w26", n.weights.w26},
            {"w46", n.weights.w46},
            {"w17", n.weights.w17},
            {"w27", n.weights.w27},
            {"w37", n.weights.w37},
            {"w47", n.weights.w47},
            {"w57", n.weights.w57}}},
          {"comparator_lif", lif(n.comparator_lif)},
          {"coincidence_lif", lif(n.coincidence_lif)},
          {"explorer_lif", lif(n.explorer_lif)},
          {"comparator_kernel", kernel(n.comparator_kernel)},
          {"detector_kernel", kernel(n.detector_kernel)},
          {"asel", ase(n.asel)},
          {"aser", ase(n.aser)}}},
    };
}

json to_json(const BatchStats& s) {
    return json{{"n_episodes", s.n_episodes},
                {"successes", s.successes},
                {"success_rate", s.success_rate},
                {"time_mean_s", s.time_mean},
                {"time_std_s", s.time_std},
                {"deviation_mean_mM", s.deviation_mean},
                {"deviation_std_mM", s.deviation_std},
                {"deviation_pct", s.deviation_pct},
                {"deviation_std_pct", s.deviation_std_pct},
                {"concentration_range_mM", s.concentration_range},
                {"within_550s_rate", s.within_550s_rate}};
}

BatchStats batch_stats_from_json(const json& j) {
    const json& s = j.contains("stats") ? j.at("stats") : j;
    BatchStats b;
    try {
        b.n_episodes = s.at("n_episodes").get<int>();
        b.successes = s.at("successes").get<int>();
        b.success_rate = s.at("success_rate").get<double>();
        b.time_mean = s.at("time_mean_s").get<double>();
        b.time_std = s.at("time_std_s").get<double>();
        b.deviation_mean = s.at("deviation_mean_mM").get<double>();
        b.deviation_std = s.at("deviation_std_mM").get<double>();
        b.deviation_pct = s.at("deviation_pct").get<double>();
        b.deviation_std_pct = s.at("deviation_std_pct").get<double>();
        b.concentration_range = s.at("concentration_range_mM").get<double>();
        b.within_550s_rate = s.at("within_550s_rate").get<double>();
    } catch (const json::exception& e) {
        throw config_error("stats", e.what());
    }
    return b;
}

BatchStats import_batch_stats(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    return batch_stats_from_json(j);
}

void export_results(const BatchStats& stats, const std::vector<RunMetrics>& metrics, ExportFormat format,
                    const std::filesystem::path& path, bool with_trajectories) {
    auto out = open_out(path);
    if (format == ExportFormat::csv) {
        out << kEpisodeCsvHeader << '\n';
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            const auto& m = metrics[i];
            out << i << ',' << (m.success ? 1 : 0) << ',';
            if (m.time_to_target) out << *m.time_to_target;
            out << ',';
            if (m.tracking_samples > 0) out << m.deviation_mean << ',' << m.deviation_std;
            else out << ',';
            out << '\n';
        }
    } else {
        json episodes = json::array();
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            const auto& m = metrics[i];
            json e{{"episode", i},
                   {"success", m.success},
                   {"time_to_target_s", m.time_to_target ? json(*m.time_to_target) : json(nullptr)},
                   {"dev_mean_mM", m.deviation_mean},
                   {"dev_std_mM", m.deviation_std},
                   {"tracking_samples", m.tracking_samples},
                   {"path_length_mm", m.path_length},
                   {"random_turns", m.random_turns},
                   {"fixed_turns", m.fixed_turns},
                   {"reached_goal", m.reached_goal},
                   {"entered_avoid_region", m.entered_avoid_region},
                   {"max_concentration_mM", m.max_concentration}};
            if (with_trajectories) {
                json rows = json::array();
                for (const auto& r : m.trajectory) rows.push_back({r.t, r.x, r.y, r.heading, r.speed, r.sensed});
                e["trajectory"] = std::move(rows);
            }
            episodes.push_back(std::move(e));
        }
        out << std::setw(2) << json{{"stats", to_json(stats)}, {"episodes", std::move(episodes)}} << '\n';
    }
    check_written(out, path);
}

void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "t,x,y,heading,speed,C_sensed\n";
    for (const auto& r : rows)
        out << r.t << ',' << r.x << ',' << r.y << ',' << r.heading << ',' << r.speed << ',' << r.sensed << '\n';
    check_written(out, path);
}

void write_raster_csv(const std::vector<RasterRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "t,C,s1,s2,s3,s4,s5,s6,s7\n";
    for (const auto& r : rows) {
        out << r.t << ',' << r.concentration;
        for (bool s : r.spikes) out << ',' << (s ? 1 : 0);
        out << '\n';
    }
    check_written(out, path);
}

void write_grid_csv(const FieldGrid& grid, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "x,y,C\n";
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) out << grid.xs[i] << ',' << grid.ys[j] << ',' << grid.at(i, j) << '\n';
    check_written(out, path);
}

void write_calibration_csv(const std::vector<CalibrationRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "gradient_mM_per_s,spike_threshold_mV,frequency_Hz\n";
    for (const auto& r : rows) out << r.gradient << ',' << r.spike_threshold << ',' << r.frequency << '\n';
    check_written(out, path);
}

} // namespace wormnav
