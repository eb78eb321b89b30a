#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wormnav/arena.hpp"
#include "wormnav/ase.hpp"
#include "wormnav/experiment.hpp"

namespace wormnav {

enum class ExportFormat { csv, json };

// Per-episode summary table (CSV) or stats plus episodes (JSON).
// Trajectories are embedded in JSON only when `with_trajectories` is set.
void export_results(const BatchStats& stats, const std::vector<RunMetrics>& metrics, ExportFormat format,
                    const std::filesystem::path& path, bool with_trajectories = false);

inline constexpr const char* kEpisodeCsvHeader = "episode,success,time_to_target_s,dev_mean_mM,dev_std_mM";

nlohmann::json to_json(const BatchStats& stats);
BatchStats batch_stats_from_json(const nlohmann::json& j);
BatchStats import_batch_stats(const std::filesystem::path& path);

void write_trajectory_csv(const std::vector<TrajectoryRow>& rows, const std::filesystem::path& path);
void write_raster_csv(const std::vector<RasterRow>& rows, const std::filesystem::path& path);
void write_grid_csv(const FieldGrid& grid, const std::filesystem::path& path);
void write_calibration_csv(const std::vector<CalibrationRow>& rows, const std::filesystem::path& path);

// Parses an experiment description. Missing keys keep their defaults; the
// `mode` key selects tracking or obstacle defaults before overrides apply.
// Throws config_error naming the offending field.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

} // namespace wormnav
