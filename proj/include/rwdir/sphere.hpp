#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace rwdir {

using Vec = std::vector<double>;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kMembershipTolerance = 1e-9;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> x);
// Chord distance ||a - b||.
double chord(std::span<const double> a, std::span<const double> b);
// Chord length of the arc of angle theta, and back.
double chord_from_angle(double theta);
double angle_from_chord(double c);
Vec unit_vector(std::size_t d, std::size_t axis, double sign = 1.0);

// x / ||x||, and the zero vector for x = 0.
Vec hat(std::span<const double> x);

// (a u + (1 - a) v) normalized; zero when u = -v and a = 1/2.
Vec interpolate(std::span<const double> u, std::span<const double> v, double alpha);

// C(u; r) = { x != 0 : ||x^ - u|| < r }.
struct Cap {
  Vec center;
  double radius = 0.0;
};

// Throws Error(kInvalidParameter) for a non-unit center or r <= 0.
Cap make_cap(Vec center, double radius);
bool cap_contains(const Cap& cap, std::span<const double> x);

// Arc of a great circle: cos(t) from + sin(t) perp for t in [0, length].
struct GreatArc {
  Vec from;
  Vec perp;
  double length = 0.0;

  Vec at(double t) const;
};

// Closed circular arc [start, start + length] in radians, start in [0, 2 pi).
struct AngleArc {
  double start = 0.0;
  double length = 0.0;
};

// The s-convex hull of finitely many unit vectors: the normalized conical
// combinations sum b_i g_i (b_i >= 0, sum != 0), with closed-hull semantics.
class SHull {
 public:
  static SHull build(std::vector<Vec> generators);

  std::size_t dimension() const { return dimension_; }
  const std::vector<Vec>& generators() const { return generators_; }
  bool origin_in_hull() const { return origin_in_hull_; }
  std::size_t rank() const { return rank_; }
  bool full_sphere() const { return full_sphere_; }

  bool contains(std::span<const double> w, double tolerance = kMembershipTolerance) const;

  // d = 2 only: the hull as closed arcs (isolated points have length 0).
  const std::vector<AngleArc>& arcs() const { return arcs_; }
  // d = 2 only: list of [start_angle, end_angle] pairs in [0, 2 pi).
  nlohmann::json arcs_json() const;

  // d = 3, rank 3: inward unit normals of the cone facets.
  const std::vector<Vec>& facet_normals() const { return facet_normals_; }

 private:
  std::size_t dimension_ = 0;
  std::vector<Vec> generators_;
  std::size_t rank_ = 0;
  bool origin_in_hull_ = false;
  bool full_sphere_ = false;
  std::vector<AngleArc> arcs_;
  std::vector<Vec> facet_normals_;
};

SHull s_hull(std::vector<Vec> generators);
bool s_hull_contains(const SHull& h, std::span<const double> w);

struct SBoundary {
  std::vector<Vec> points;
  std::vector<GreatArc> arcs;
};

// Boundary relative to the sphere; d = 2 or 3 only.
SBoundary s_boundary(const SHull& h);

// Closed arcs covering the directions of cone(angles) in the plane.
std::vector<AngleArc> planar_cone_arcs(std::vector<double> angles, bool* full_circle = nullptr);

// Non-negative least squares: argmin ||A b - y|| over b >= 0 (Lawson-Hanson).
// Returns the residual norm; b receives the solution when non-null.
double nnls_residual(const std::vector<Vec>& columns, std::span<const double> y, Vec* b = nullptr);

// d = 2: angles 2 pi k / M from 0. d >= 3: farthest-point subsample of a
// normalized Gaussian pool drawn from `seed`.
std::vector<Vec> direction_grid(std::size_t d, std::size_t m, std::uint64_t seed);

}  // namespace rwdir
