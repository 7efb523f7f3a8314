#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwdir/ext_real.hpp"
#include "rwdir/increment_spec.hpp"
#include "rwdir/rng.hpp"
#include "rwdir/samplers.hpp"

namespace rwdir {

// Running walk record. Lattice specs keep exact int64 positions; all other
// specs keep an extended-range vector.
struct WalkState {
  std::size_t dimension = 0;
  bool lattice = true;
  bool radial = false;
  std::uint64_t n = 0;
  std::vector<std::int64_t> lattice_position;
  ExtVec real_position;

  // Biggest-jump decomposition (RADIAL_PRODUCT only). T_n = M_n + B_n.
  ExtReal max_xi;   // M_n
  ExtReal rest;     // B_n
  std::uint64_t k = 0;
  std::size_t atom_at_max = 0;
  std::vector<double> q_at_max;

  bool overflow = false;
  std::uint64_t saturations = 0;

  static WalkState initial(const IncrementSampler& sampler);

  ExtReal total() const { return max_xi + rest; }
  ExtReal norm() const;
  bool at_origin() const;
  // Position as doubles; components beyond the double range become +-inf.
  void position(std::span<double> out) const;
  // S_n / |S_n|, or zero at the origin.
  void direction(std::span<double> out) const;
  ExtReal component(std::size_t i) const;
};

// Advances `state` by one increment. On integer overflow the state is left
// at S_{n} with `overflow` set and false is returned.
bool advance(WalkState& state, const IncrementDraw& draw, const IncrementSampler& sampler);
WalkState step(WalkState state, const IncrementDraw& draw, const IncrementSampler& sampler);

struct BoundCheck {
  double rho = 0.0;
  double bound = 0.0;
  double actual = 0.0;
  bool ok = true;
  bool applicable = true;  // false when rho >= 1 (NOT_APPLICABLE)
};

// ||S^_n - Q_k(n)|| <= 2 rho / (1 - rho) with rho = B_n / M_n.
BoundCheck biggest_jump_bound_check(const WalkState& state);

// What an observer sees at one step.
struct StepView {
  std::uint64_t n = 0;
  std::span<const double> position;
  std::span<const double> direction;
  ExtReal norm;
  double log_norm = 0.0;  // -inf at the origin
  const WalkState* state = nullptr;
};

class WalkObserver {
 public:
  enum class Cadence { kEveryStep, kCheckpoints };

  virtual ~WalkObserver() = default;
  virtual std::string_view name() const = 0;
  virtual Cadence cadence() const { return Cadence::kEveryStep; }
  // Every step (kEveryStep observers only).
  virtual void observe(const StepView&) {}
  // At each checkpoint, after observe() for that step.
  virtual void checkpoint(const StepView&) {}
  // Once, after the last step (which is always also a checkpoint).
  virtual void finish(const StepView&) {}
};

// Dyadic checkpoints 1, 2, 4, ... below n_steps, followed by n_steps.
std::vector<std::uint64_t> dyadic_checkpoints(std::uint64_t n_steps);

struct TrajectoryRow {
  std::uint64_t n = 0;
  std::vector<std::int64_t> lattice_position;  // lattice walks
  std::vector<ExtReal> position;               // all walks
  ExtReal norm;
  std::vector<double> direction;
  std::optional<ExtReal> max_xi;
  std::optional<ExtReal> rest;
  std::optional<std::uint64_t> k;
};

struct TrajectoryRecord {
  std::size_t dimension = 0;
  bool lattice = true;
  bool radial = false;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t requested_steps = 0;
  std::uint64_t completed_steps = 0;
  bool halted = false;  // stopped early on overflow
  std::uint64_t saturations = 0;
  std::vector<TrajectoryRow> checkpoints;
  std::vector<TrajectoryRow> dense;  // every step n <= dense cap

  // n, S_1..S_d, norm, dir_1..dir_d, M, B, k
  std::string to_csv() const;
  std::string dense_to_csv() const;
  nlohmann::json to_json() const;
  // FNV-1a of the checkpoint and dense CSV text, as 16 hex digits.
  std::string hash() const;
};

struct WalkOptions {
  std::uint64_t dense_cap = 0;
};

TrajectoryRecord run_walk(const IncrementSpec& spec, std::uint64_t n_steps, const RandomStream& rng,
                          std::span<WalkObserver* const> observers = {}, const WalkOptions& options = {});
TrajectoryRecord run_walk(const IncrementSpec& spec, std::uint64_t n_steps, std::uint64_t seed,
                          std::span<WalkObserver* const> observers = {}, const WalkOptions& options = {});

std::string fnv1a_hex(std::string_view text);

}  // namespace rwdir
