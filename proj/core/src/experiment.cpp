#include "wormnav/experiment.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "wormnav/errors.hpp"

namespace wormnav {

ExperimentConfig ExperimentConfig::tracking_defaults() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::obstacle_defaults() {
    ExperimentConfig c;
    c.arena = ScalarField::obstacle_arena();
    c.network = NetworkConfig::obstacle_defaults();
    c.kinematics = KinematicsParams::obstacle_defaults();
    c.start = {12.0, 12.0};
    c.n_episodes = 50;
    return c;
}

void ExperimentConfig::validate() const {
    arena.validate();
    network.validate();
    kinematics.validate();
    levy.validate();
    graded.validate();
    noise.validate();
    if (!arena.bounds.contains(start)) throw config_error("start", "outside the arena");
    if (!(episode_duration >= 0.0)) throw config_error("episode_duration", "must be non-negative");
    if (n_episodes < 1) throw config_error("n_episodes", "must be at least 1");
    if (!(success_tolerance > 0.0)) throw config_error("success_tolerance", "must be positive");
    if (!(behavior_dt > 0.0)) throw config_error("behavior_dt", "must be positive");
    if (!(neural_dt > 0.0) || neural_dt > behavior_dt) throw config_error("neural_dt", "must lie in (0, behavior_dt]");
    const double ratio = behavior_dt / neural_dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-6) throw config_error("neural_dt", "must divide behavior_dt");
    if (parallel < 1) throw config_error("parallel", "must be at least 1");
    if (!(concentration_range > 0.0)) throw config_error("concentration_range", "must be positive");
    if (network.mode == NetworkMode::obstacle && strategy != Strategy::snn)
        throw config_error("strategy", "obstacle mode supports only the spiking network");

    double peak = arena.baseline;
    for (const auto& b : arena.bumps) peak += std::max(b.amplitude, 0.0);
    if (noise.kind != NoiseKind::none) peak += noise.max_magnitude;
    if (!(neural_dt * network.asel.max_rate(peak) < 1.0) || !(neural_dt * network.aser.max_rate(peak) < 1.0))
        throw config_error("neural_dt", "too large for the channel transition rates");
}

namespace {

struct DeviationAccumulator {
    void add(RunMetrics& m, double dev) {
        m.deviation_sum += dev;
        m.deviation_sq_sum += dev * dev;
        ++m.tracking_samples;
    }
};

void finish_deviation(RunMetrics& m) {
    if (m.tracking_samples == 0) return;
    const double n = static_cast<double>(m.tracking_samples);
    m.deviation_mean = m.deviation_sum / n;
    m.deviation_std = std::sqrt(std::max(0.0, m.deviation_sq_sum / n - m.deviation_mean * m.deviation_mean));
}

} // namespace

RunMetrics run_episode(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    RunMetrics m;
    Rng rng = make_rng(seed);
    const bool obstacle = cfg.network.mode == NetworkMode::obstacle;
    const double target = cfg.network.set_point;
    const auto steps = static_cast<long>(std::llround(cfg.episode_duration / cfg.behavior_dt));
    const auto substeps = static_cast<long>(std::llround(cfg.behavior_dt / cfg.neural_dt));

    AgentState agent;
    agent.position = cfg.start;
    agent.heading = wrap_angle(-std::numbers::pi + 2.0 * std::numbers::pi * uniform01(rng));
    agent.speed = cfg.kinematics.v_explore;
    const double c_start = concentration_at(cfg.arena, agent.position);
    m.max_concentration = c_start;

    NetworkState net;
    GradedNetworkState graded;
    LevyWalker walker;
    switch (cfg.strategy) {
    case Strategy::snn: net = NetworkState::initial(cfg.network, c_start, cfg.neural_dt); break;
    case Strategy::graded: graded = GradedNetworkState::initial(cfg.network, c_start); break;
    case Strategy::levy:
        walker = LevyWalker::start(cfg.start, cfg.levy, rng);
        walker.agent.heading = agent.heading;
        agent = walker.agent;
        break;
    }

    DeviationAccumulator acc;
    for (long k = 0; k < steps && agent.alive; ++k) {
        const double reading = sense(cfg.arena, cfg.noise, agent.position, rng);
        const double t_end = static_cast<double>(k + 1) * cfg.behavior_dt;

        if (cfg.strategy == Strategy::levy) {
            const Vec2 before = walker.agent.position;
            const long turns_before = walker.turns;
            levy_forager_step(walker, cfg.levy, rng, cfg.behavior_dt, cfg.arena.bounds);
            m.random_turns += walker.turns - turns_before;
            m.path_length += std::hypot(walker.agent.position.x - before.x, walker.agent.position.y - before.y);
            m.distance_commanded += cfg.levy.speed * cfg.behavior_dt;
            agent = walker.agent;
        } else {
            for (long j = 0; j < substeps && agent.alive; ++j) {
                const MotionCommand cmd = cfg.strategy == Strategy::snn
                                              ? network_advance(net, cfg.network, reading, cfg.neural_dt)
                                              : graded_network_advance(graded, cfg.network, cfg.graded, reading,
                                                                       cfg.neural_dt);
                if (cfg.record_raster && cfg.strategy == Strategy::snn)
                    m.raster.push_back({net.time, reading, net.spikes});
                if (cmd.turn == Turn::none) continue;
                if (cmd.turn == Turn::random_uniform) ++m.random_turns;
                if (cmd.turn == Turn::cw_fixed || cmd.turn == Turn::ccw_fixed) ++m.fixed_turns;
                agent = apply_command(agent, cmd, cfg.kinematics, rng);
            }
            if (!agent.alive) m.halted = true;
            const Vec2 before = agent.position;
            m.distance_commanded += agent.speed * cfg.behavior_dt;
            agent = integrate_position(agent, cfg.behavior_dt, cfg.arena.bounds);
            m.path_length += std::hypot(agent.position.x - before.x, agent.position.y - before.y);
        }

        const double clean = concentration_at(cfg.arena, agent.position);
        m.max_concentration = std::max(m.max_concentration, clean);
        if (cfg.record_trajectory)
            m.trajectory.push_back({t_end, agent.position.x, agent.position.y, agent.heading, agent.speed, reading});

        if (obstacle) {
            if (clean > cfg.network.obstacle_avoid_level) m.entered_avoid_region = true;
            if (!m.reached_goal && clean <= cfg.network.obstacle_goal_level) {
                m.reached_goal = true;
                m.time_to_target = t_end;
            }
            continue;
        }
        const double dev = std::abs(clean - target);
        if (!m.success && dev <= cfg.success_tolerance) {
            m.success = true;
            m.time_to_target = t_end;
        }
        if (m.success) acc.add(m, dev);
    }
    if (obstacle) m.success = m.reached_goal && !m.entered_avoid_region;
    finish_deviation(m);
    return m;
}

BatchStats aggregate(const std::vector<RunMetrics>& runs, double concentration_range) {
    BatchStats s;
    s.n_episodes = static_cast<int>(runs.size());
    s.concentration_range = concentration_range;
    double t_sum = 0.0, t_sq = 0.0, d_sum = 0.0, d_sq = 0.0;
    std::size_t d_n = 0;
    int early = 0;
    for (const auto& r : runs) {
        if (r.success) {
            ++s.successes;
            const double t = r.time_to_target.value_or(0.0);
            t_sum += t;
            t_sq += t * t;
        }
        if (r.time_to_target && *r.time_to_target < 550.0) ++early;
        d_sum += r.deviation_sum;
        d_sq += r.deviation_sq_sum;
        d_n += r.tracking_samples;
    }
    if (s.n_episodes > 0) {
        s.success_rate = static_cast<double>(s.successes) / s.n_episodes;
        s.within_550s_rate = static_cast<double>(early) / s.n_episodes;
    }
    if (s.successes > 0) {
        s.time_mean = t_sum / s.successes;
        s.time_std = std::sqrt(std::max(0.0, t_sq / s.successes - s.time_mean * s.time_mean));
    }
    if (d_n > 0) {
        const double n = static_cast<double>(d_n);
        s.deviation_mean = d_sum / n;
        s.deviation_std = std::sqrt(std::max(0.0, d_sq / n - s.deviation_mean * s.deviation_mean));
    }
    s.deviation_pct = 100.0 * s.deviation_mean / concentration_range;
    s.deviation_std_pct = 100.0 * s.deviation_std / concentration_range;
    return s;
}

BatchResult run_batch_detailed(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n_episodes);
    std::vector<RunMetrics> runs(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) runs[i] = run_episode(cfg, cfg.seed + i);
    };
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.parallel), n);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    BatchResult out;
    out.stats = aggregate(runs, cfg.concentration_range);
    out.runs = std::move(runs);
    return out;
}

BatchStats run_batch(const ExperimentConfig& cfg) { return run_batch_detailed(cfg).stats; }

NetworkWeights drift_weights(const NetworkWeights& base, bool n5_more, bool n6_more, bool n7_more, double drift) {
    NetworkWeights w = base;
    const double up5 = n5_more ? 1.0 + drift : 1.0 - drift;
    const double up6 = n6_more ? 1.0 + drift : 1.0 - drift;
    const double up7 = n7_more ? 1.0 + drift : 1.0 - drift;
    const double down7 = n7_more ? 1.0 - drift : 1.0 + drift;
    w.w15 *= up5;
    w.w35 *= up5;
    w.w26 *= up6;
    w.w46 *= up6;
    w.w17 *= up7;
    w.w27 *= up7;
    w.w37 *= down7;
    w.w47 *= down7;
    return w;
}

std::vector<CornerResult> corner_analysis(const ExperimentConfig& cfg, double drift) {
    if (!(drift >= 0.0 && drift < 1.0)) throw config_error("drift", "must lie in [0, 1)");
    std::vector<CornerResult> out;
    out.push_back({"baseline", "Case 1", cfg.network.weights, run_batch(cfg)});
    const auto case_of = [](bool a, bool b, bool c) -> std::string {
        if (!a && !b && !c) return "Case 2";
        if (a && b && c) return "Case 3";
        if (!a && !b && c) return "Case 4";
        if (a && b && !c) return "Case 5";
        if (!a && b && !c) return "Case 6";
        return "";
    };
    for (int mask = 0; mask < 8; ++mask) {
        const bool m5 = mask & 4, m6 = mask & 2, m7 = mask & 1;
        ExperimentConfig c = cfg;
        c.network.weights = drift_weights(cfg.network.weights, m5, m6, m7, drift);
        std::string label = std::string("N5") + (m5 ? "+" : "-") + " N6" + (m6 ? "+" : "-") + " N7" + (m7 ? "+" : "-");
        out.push_back({label, case_of(m5, m6, m7), c.network.weights, run_batch(c)});
    }
    return out;
}

} // namespace wormnav
