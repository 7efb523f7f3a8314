#include "rwdir/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rwdir/error.hpp"

namespace rwdir {

namespace {

// Factor g per full doubling, scaled for a partial final interval.
double required_growth(double g, std::uint64_t from_n, std::uint64_t to_n) {
  return std::pow(g, std::log2(static_cast<double>(to_n) / static_cast<double>(from_n)));
}

bool grew(double from, double to, double factor) { return to > from && to >= factor * from; }

void row_position(const TrajectoryRow& row, bool lattice, std::vector<double>& out) {
  out.resize(row.position.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = lattice ? static_cast<double>(row.lattice_position[i]) : row.position[i].to_double();
  }
}

}  // namespace

std::string_view to_string(ProjectionVerdict v) {
  switch (v) {
    case ProjectionVerdict::kPlus: return "PLUS";
    case ProjectionVerdict::kMinus: return "MINUS";
    case ProjectionVerdict::kOsc: return "OSC";
    case ProjectionVerdict::kUndecided: return "UNDECIDED";
  }
  return "?";
}

void ProjectionThresholds::validate(std::string_view path) const {
  if (!(growth > 1.0) || !std::isfinite(growth)) {
    throw Error(ErrorCode::kInvalidConfig, std::string(path) + ".growth: must be > 1");
  }
  if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::kInvalidConfig, std::string(path) + ".c: must be >= 0");
}

nlohmann::json ProjectionThresholds::to_json() const { return {{"growth", growth}, {"c", c}}; }

ProjectionStats project_series(const TrajectoryRecord& trajectory, std::span<const double> u) {
  ProjectionStats stats;
  stats.u.assign(u.begin(), u.end());
  stats.dense = trajectory.dense.size() >= trajectory.completed_steps;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t dense_index = 0;
  std::vector<double> position;
  for (const TrajectoryRow& cp : trajectory.checkpoints) {
    while (dense_index < trajectory.dense.size() && trajectory.dense[dense_index].n <= cp.n) {
      row_position(trajectory.dense[dense_index], trajectory.lattice, position);
      const double v = dot(position, u);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++dense_index;
    }
    row_position(cp, trajectory.lattice, position);
    const double v = dot(position, u);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    stats.n.push_back(cp.n);
    stats.min.push_back(lo);
    stats.max.push_back(hi);
    stats.final_value = v;
    stats.final_n = cp.n;
  }
  return stats;
}

ProjectionObserver::ProjectionObserver(std::vector<Vec> directions) {
  for (Vec& u : directions) {
    ProjectionStats s;
    s.u = std::move(u);
    stats_.push_back(std::move(s));
  }
  running_min_.assign(stats_.size(), 0.0);
  running_max_.assign(stats_.size(), 0.0);
}

void ProjectionObserver::observe(const StepView& view) {
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    const double v = dot(view.position, stats_[i].u);
    if (v < running_min_[i]) running_min_[i] = v;
    if (v > running_max_[i]) running_max_[i] = v;
  }
}

void ProjectionObserver::checkpoint(const StepView& view) {
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    stats_[i].n.push_back(view.n);
    stats_[i].min.push_back(running_min_[i]);
    stats_[i].max.push_back(running_max_[i]);
  }
}

void ProjectionObserver::finish(const StepView& view) {
  for (ProjectionStats& s : stats_) {
    s.final_value = dot(view.position, s.u);
    s.final_n = view.n;
  }
}

ProjectionVerdict classify(const ProjectionStats& stats, const ProjectionThresholds& thresholds) {
  const std::size_t j = stats.n.size();
  if (j < 4 || stats.min.size() != j || stats.max.size() != j) {
    throw Error(ErrorCode::kInvalidInput, "classification needs at least 4 checkpoints");
  }
  const double g = thresholds.growth;
  const double scale = thresholds.c * std::sqrt(static_cast<double>(stats.final_n));
  const std::size_t half = j / 2;
  const std::size_t quarter = j / 4;

  const bool min_frozen = stats.min[j - 1] == stats.min[half];
  const bool max_frozen = stats.max[j - 1] == stats.max[half];
  auto last_two = [&](const std::vector<double>& series, double sign) {
    const double a = sign * series[j - 3];
    const double b = sign * series[j - 2];
    const double c = sign * series[j - 1];
    return a > 0.0 && grew(a, b, required_growth(g, stats.n[j - 3], stats.n[j - 2])) &&
           grew(b, c, required_growth(g, stats.n[j - 2], stats.n[j - 1]));
  };

  if (min_frozen && last_two(stats.max, 1.0) && stats.final_value > scale) return ProjectionVerdict::kPlus;
  if (max_frozen && last_two(stats.min, -1.0) && stats.final_value < -scale) return ProjectionVerdict::kMinus;
  if (grew(-stats.min[quarter], -stats.min[j - 1], g) && grew(stats.max[quarter], stats.max[j - 1], g)) {
    return ProjectionVerdict::kOsc;
  }
  return ProjectionVerdict::kUndecided;
}

std::vector<ExceptionalCandidate> scan_exceptional(const std::vector<ProjectionStats>& stats,
                                                   const ProjectionThresholds& thresholds) {
  if (!stats.empty() && stats.front().u.size() == 2 && stats.size() < 256) {
    throw Error(ErrorCode::kInvalidInput, "exceptional scan in d = 2 needs at least 256 directions");
  }
  std::vector<ExceptionalCandidate> out;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const ProjectionStats& s = stats[i];
    if (classify(s, thresholds) != ProjectionVerdict::kUndecided) continue;
    const std::size_t j = s.n.size();
    const bool max_frozen = s.max[j - 1] == s.max[j / 2];
    const bool min_frozen = s.min[j - 1] == s.min[j / 2];
    if (max_frozen || min_frozen) out.push_back({i, s, max_frozen, min_frozen});
  }
  return out;
}

std::vector<ExceptionalCandidate> scan_exceptional(const TrajectoryRecord& trajectory, const std::vector<Vec>& grid,
                                                   const ProjectionThresholds& thresholds) {
  std::vector<ProjectionStats> stats;
  for (const Vec& u : grid) stats.push_back(project_series(trajectory, u));
  return scan_exceptional(stats, thresholds);
}

std::string projections_csv(const std::vector<ProjectionStats>& stats, const ProjectionThresholds& thresholds) {
  if (stats.empty()) return "index\n";
  const std::size_t d = stats.front().u.size();
  std::string out = "index";
  for (std::size_t i = 1; i <= d; ++i) out += ",u_" + std::to_string(i);
  for (std::uint64_t n : stats.front().n) out += ",m_" + std::to_string(n);
  for (std::uint64_t n : stats.front().n) out += ",M_" + std::to_string(n);
  out += ",final,verdict\n";
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const ProjectionStats& s = stats[k];
    out += std::to_string(k);
    for (double x : s.u) out += ',' + format_double(x);
    for (double x : s.min) out += ',' + format_double(x);
    for (double x : s.max) out += ',' + format_double(x);
    out += ',' + format_double(s.final_value) + ',';
    out += s.n.size() >= 4 ? std::string(to_string(classify(s, thresholds))) : std::string("UNDECIDED");
    out += '\n';
  }
  return out;
}

}  // namespace rwdir
