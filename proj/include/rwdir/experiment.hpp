#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwdir/direction_estimator.hpp"
#include "rwdir/hull.hpp"
#include "rwdir/increment_spec.hpp"
#include "rwdir/projection.hpp"
#include "rwdir/walk.hpp"

namespace rwdir {

inline constexpr std::string_view kVersion = "0.1.0";

struct ExperimentConfig {
  IncrementSpec spec;
  std::uint64_t n_steps = 10000;
  std::uint64_t n_runs = 1;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;

  std::size_t grid_size = 64;
  std::uint64_t grid_seed = 0;
  EstimatorConfig estimator;

  std::size_t projection_directions = 64;
  ProjectionThresholds classifier;

  bool hull = true;
  std::size_t hull_tracked = 16;
  std::size_t hull_batch = 1024;

  std::uint64_t dense_cap = 0;
  std::string output_dir = "out";

  // Range checks; Error(kInvalidConfig) naming the field.
  void validate() const;
  // Canonical form: every knob that affects results spelled out. `workers`
  // and `output_dir` are execution settings and stay out of it.
  nlohmann::json to_json() const;
  // Missing knobs take their defaults (grid 64 for d = 2 and 256 otherwise;
  // R_0 = 1000 for LOG_TAIL magnitudes). Unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
};

std::string config_hash(const ExperimentConfig& config);

struct RunArtifacts {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  TrajectoryRecord trajectory;
  DirectionSetEstimate estimate;
  std::vector<ProjectionStats> projections;
  std::vector<ProjectionVerdict> verdicts;
  std::optional<HullGrowthReport> hull;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunArtifacts> runs;
  std::optional<Consensus> consensus;
  nlohmann::json summary;
};

// Runs every seeded walk with all observers; no files are touched.
ExperimentResult execute_experiment(const ExperimentConfig& config);
// Writes run_XXX/{trajectory,directions,projections,hull}.csv, summary.json
// (with the manifest) and consensus.csv when there is more than one run.
// Returns the written paths. Error(kIo) when the directory is unwritable.
std::vector<std::filesystem::path> write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir);
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace rwdir
