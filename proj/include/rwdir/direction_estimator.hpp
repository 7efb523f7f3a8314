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

enum class Verdict { kIn, kOut, kUndecided };
std::string_view to_string(Verdict v);

// Cap-visit knobs. These are statistical engineering choices, not values
// taken from the theory; they are echoed into every output.
struct EstimatorConfig {
  double cap_radius = 0.3;
  double r0 = 10.0;                // R_0; levels R_l = R_0 2^l
  std::size_t levels = 8;          // L, so levels 0..L
  std::uint64_t burn_in = 0;       // steps n < burn_in are ignored
  std::uint64_t v_min = 3;         // visits needed at the top level for IN
  std::size_t l_out = 1;           // OUT iff no visits above this level
  std::size_t min_top_level = 2;   // IN needs the top reached level >= this
  std::vector<double> alphas;      // growth exponents for the graded sets
  double kappa = 0.1;              // graded threshold on |S_n| / n^alpha

  // Throws Error(kInvalidConfig) naming the offending field below `path`.
  void validate(std::string_view path = "estimator") const;
  nlohmann::json to_json() const;
};

struct PointEstimate {
  Verdict verdict = Verdict::kUndecided;
  int top_level = -1;                       // -1: never beyond R_0
  std::vector<std::uint64_t> visits;        // per level
  std::vector<std::uint64_t> first_visit;   // per level, 0 = never
  std::vector<double> graded_log_max;       // per alpha: max log(|S_n| / n^alpha)
  std::vector<std::size_t> graded_scales;   // per alpha: late dyadic scales above kappa
  std::vector<Verdict> graded;              // per alpha
};

struct DirectionSetEstimate {
  std::vector<Vec> grid;
  EstimatorConfig config;
  int top_level = -1;
  std::vector<PointEstimate> points;
  std::vector<bool> expected_full;  // per alpha: d >= 3 and alpha < 1/2
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t n_steps = 0;

  std::size_t count(Verdict v) const;
  double coverage() const;  // fraction of grid points IN
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// Records which caps C(u; r) the walk visits beyond each escape radius.
class CapVisitAccumulator : public WalkObserver {
 public:
  CapVisitAccumulator(std::vector<Vec> grid, EstimatorConfig config);

  std::string_view name() const override { return "direction_estimator"; }
  void observe(const StepView& view) override;

  // S_n given as a plain vector.
  void record_visit(std::span<const double> s, std::uint64_t n);
  // S_n given as its direction and log norm (the walk's fast path).
  void record_visit(std::span<const double> direction, double log_norm, std::uint64_t n);

  void set_metadata(std::uint64_t seed, std::uint64_t stream) {
    seed_ = seed;
    stream_ = stream;
  }

  const std::vector<Vec>& grid() const { return grid_; }
  const EstimatorConfig& config() const { return config_; }
  std::uint64_t visits(std::size_t point, std::size_t level) const { return visits_[point * level_count_ + level]; }
  std::uint64_t steps_recorded() const { return steps_recorded_; }

  // Throws Error(kInvalidState) when nothing was recorded.
  DirectionSetEstimate finalize() const;

 private:
  static constexpr std::size_t kScales = 64;

  // `length` may be +inf for extended-range walks; levels then use log_norm.
  void record(std::span<const double> direction, double length, double log_norm, std::uint64_t n);

  std::vector<Vec> grid_;
  EstimatorConfig config_;
  std::size_t dimension_;
  std::size_t level_count_;
  double cos_threshold_;
  double log_r0_;
  std::vector<double> level_radius_;
  std::vector<std::uint64_t> visits_;
  std::vector<std::uint64_t> first_visit_;
  std::vector<double> graded_;  // [point][alpha][scale]
  std::uint64_t steps_recorded_ = 0;
  std::uint64_t last_n_ = 0;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
};

DirectionSetEstimate finalize(const CapVisitAccumulator& acc);

struct Consensus {
  std::vector<Vec> grid;
  std::size_t runs = 0;
  std::vector<Verdict> verdicts;
  std::vector<double> agreement;        // per point; 1 when no run decided
  std::vector<std::size_t> decided_runs;
  std::vector<std::size_t> in_runs;
  double mean_agreement = 1.0;          // over points with a decided run
  double coverage = 0.0;                // consensus IN fraction
  double union_coverage = 0.0;          // fraction IN in at least one run
  std::vector<double> run_coverage;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// Majority verdict among the runs that decided each point; ties are UNDECIDED.
Consensus combine_runs(std::span<const DirectionSetEstimate> estimates);

}  // namespace rwdir
