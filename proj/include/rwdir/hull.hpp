#pragma once

#include <array>
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

// Convex hull of S_0 = 0, S_1, ..., S_n.
//
// d = 2 keeps the exact counter-clockwise polygon (int64 coordinates with
// 128-bit cross products for lattice walks, doubles otherwise). d >= 3 keeps
// the support function over a fixed direction grid, so the inscribed radius
// there is an upper estimate with grid-resolution error.
class HullState {
 public:
  HullState(std::size_t dimension, std::vector<Vec> tracked, bool lattice = false,
            std::size_t support_directions = 64, std::uint64_t support_seed = 0);

  void update(const std::vector<Vec>& batch);
  void update_lattice(const std::vector<std::vector<std::int64_t>>& batch);

  std::size_t dimension() const { return dimension_; }
  bool lattice() const { return lattice_; }
  std::uint64_t points_seen() const { return points_seen_; }
  // Non-decreasing: the largest r with B(0; r) inside the hull so far.
  double inscribed_radius() const { return radius_; }
  // inf over k <= n of S_k . u for a tracked u; Error(kInvalidInput) otherwise.
  double confinement(std::span<const double> u) const;
  const std::vector<Vec>& tracked() const { return tracked_; }
  const std::vector<double>& confinement_values() const { return confinement_; }

  std::size_t vertex_count() const;
  // d = 2: counter-clockwise polygon; d >= 3: support-attaining points.
  std::vector<Vec> vertices() const;
  // d = 2 exact point-in-polygon; d >= 3 tests the support half-spaces.
  bool contains(std::span<const double> x, double tolerance = 1e-9) const;

 private:
  void track(std::span<const double> p);
  void refresh_radius();

  std::size_t dimension_;
  bool lattice_;
  std::vector<Vec> tracked_;
  std::vector<double> confinement_;
  double radius_ = 0.0;
  std::uint64_t points_seen_ = 0;

  std::vector<std::array<std::int64_t, 2>> lattice_polygon_;
  std::vector<std::array<double, 2>> real_polygon_;

  std::vector<Vec> support_grid_;
  std::vector<double> support_;
  std::vector<Vec> support_points_;
};

// 2-D hull of arbitrary points, counter-clockwise without collinear vertices.
std::vector<std::array<double, 2>> convex_hull_2d(std::vector<std::array<double, 2>> points);
std::vector<std::array<std::int64_t, 2>> convex_hull_2d(std::vector<std::array<std::int64_t, 2>> points);

// Distance from the origin to the boundary when it lies strictly inside the
// polygon, else 0.
double polygon_inscribed_radius(const std::vector<std::array<double, 2>>& polygon);

struct HullSample {
  std::uint64_t n = 0;
  double radius = 0.0;
  std::size_t vertices = 0;
  std::vector<double> confinement;
};

struct HullGrowthReport {
  std::vector<Vec> tracked;
  std::vector<HullSample> series;
  bool full_space_trend = false;
  bool confined = false;
  std::vector<std::size_t> confined_directions;
  std::size_t growth_events = 0;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// Builds the hull on the fly in batches and samples it at checkpoints.
class HullTracker : public WalkObserver {
 public:
  HullTracker(std::size_t dimension, std::vector<Vec> tracked, bool lattice, std::size_t batch_size = 1024);

  std::string_view name() const override { return "hull_tracker"; }
  void observe(const StepView& view) override;
  void checkpoint(const StepView& view) override;
  void finish(const StepView& view) override;

  const HullState& hull() const { return hull_; }
  const std::vector<HullSample>& series() const { return series_; }

 private:
  void flush();

  HullState hull_;
  std::size_t batch_size_;
  std::vector<Vec> pending_;
  std::vector<std::vector<std::int64_t>> pending_lattice_;
  std::vector<HullSample> series_;
};

// FULL_SPACE_TREND: r_n increased at >= 3 checkpoints in the last half of the
// ladder. CONFINED: r_n and some tracked confinement unchanged over the last
// 3 checkpoints. The two flags are independent.
HullGrowthReport hull_growth_report(const HullTracker& tracker);
HullGrowthReport hull_growth_report(const std::vector<Vec>& tracked, const std::vector<HullSample>& series);

}  // namespace rwdir
