#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwdir/sphere.hpp"
#include "rwdir/walk.hpp"

namespace rwdir {

enum class ProjectionVerdict { kPlus, kMinus, kOsc, kUndecided };
std::string_view to_string(ProjectionVerdict v);

// Heuristic knobs: growth factor g and the final-value scale c.
struct ProjectionThresholds {
  double growth = 1.5;
  double c = 0.1;

  void validate(std::string_view path = "classifier") const;
  nlohmann::json to_json() const;
};

// Running extremes of S_n . u on the checkpoint ladder.
struct ProjectionStats {
  Vec u;
  std::vector<std::uint64_t> n;
  std::vector<double> min;  // min over k <= n_j of S_k . u (S_0 included)
  std::vector<double> max;
  double final_value = 0.0;
  std::uint64_t final_n = 0;
  bool dense = true;  // false when extremes were taken from checkpoints only
};

// From a stored trajectory; exact when the dense trace covers every step.
ProjectionStats project_series(const TrajectoryRecord& trajectory, std::span<const double> u);

// Live per-step extremes for a set of directions, O(1) memory per direction.
class ProjectionObserver : public WalkObserver {
 public:
  explicit ProjectionObserver(std::vector<Vec> directions);

  std::string_view name() const override { return "projection_classifier"; }
  void observe(const StepView& view) override;
  void checkpoint(const StepView& view) override;
  void finish(const StepView& view) override;

  const std::vector<ProjectionStats>& stats() const { return stats_; }

 private:
  std::vector<ProjectionStats> stats_;
  std::vector<double> running_min_;
  std::vector<double> running_max_;
};

// Needs at least 4 checkpoints (Error kInvalidInput otherwise).
ProjectionVerdict classify(const ProjectionStats& stats, const ProjectionThresholds& thresholds = {});

struct ExceptionalCandidate {
  std::size_t index = 0;
  ProjectionStats stats;
  bool max_frozen = false;
  bool min_frozen = false;
};

// UNDECIDED directions whose max or min stopped moving over the last half of
// the ladder. d = 2 needs at least 256 directions.
std::vector<ExceptionalCandidate> scan_exceptional(const std::vector<ProjectionStats>& stats,
                                                   const ProjectionThresholds& thresholds = {});
std::vector<ExceptionalCandidate> scan_exceptional(const TrajectoryRecord& trajectory, const std::vector<Vec>& grid,
                                                   const ProjectionThresholds& thresholds = {});

// u components, per-checkpoint m_j / M_j, final value, verdict.
std::string projections_csv(const std::vector<ProjectionStats>& stats, const ProjectionThresholds& thresholds);

}  // namespace rwdir
