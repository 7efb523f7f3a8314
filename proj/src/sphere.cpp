#include "rwdir/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "rwdir/error.hpp"
#include "rwdir/rng.hpp"

namespace rwdir {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleTolerance = 1e-9;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

Eigen::MatrixXd as_matrix(const std::vector<Vec>& columns, std::size_t d) {
  Eigen::MatrixXd a(d, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t i = 0; i < d; ++i) a(i, j) = columns[j][i];
  }
  return a;
}

std::size_t matrix_rank(const std::vector<Vec>& columns, std::size_t d) {
  if (columns.empty()) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(as_matrix(columns, d));
  lu.setThreshold(1e-10);
  return static_cast<std::size_t>(lu.rank());
}

Vec cross(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool arcs_contain(const std::vector<AngleArc>& arcs, double phi, double tolerance) {
  for (const AngleArc& arc : arcs) {
    const double delta = wrap_angle(phi - arc.start);
    if (delta <= arc.length + tolerance || delta >= kTwoPi - tolerance) return true;
  }
  return false;
}

// Arcs of the planar cone spanned by `in_plane` (unit vectors in span{a, b}),
// lifted to great arcs and points on the sphere.
void lift_planar(const std::vector<Vec>& in_plane, const Vec& a, const Vec& b, SBoundary& out) {
  std::vector<double> angles;
  for (const Vec& g : in_plane) angles.push_back(std::atan2(dot(g, b), dot(g, a)));
  bool full = false;
  const std::vector<AngleArc> arcs = planar_cone_arcs(angles, &full);
  auto point_at = [&](double t) {
    Vec p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) p[i] = std::cos(t) * a[i] + std::sin(t) * b[i];
    return p;
  };
  if (full) {
    out.arcs.push_back({a, b, kTwoPi});
    return;
  }
  for (const AngleArc& arc : arcs) {
    if (arc.length == 0.0) {
      out.points.push_back(point_at(arc.start));
    } else {
      const Vec from = point_at(arc.start);
      const Vec perp = point_at(arc.start + std::numbers::pi / 2.0);
      out.arcs.push_back({from, perp, arc.length});
    }
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double chord(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

double chord_from_angle(double theta) { return 2.0 * std::sin(theta / 2.0); }

double angle_from_chord(double c) { return 2.0 * std::asin(std::clamp(c / 2.0, 0.0, 1.0)); }

Vec unit_vector(std::size_t d, std::size_t axis, double sign) {
  Vec e(d, 0.0);
  e[axis] = sign;
  return e;
}

Vec hat(std::span<const double> x) {
  const double length = norm(x);
  Vec out(x.size(), 0.0);
  if (length > 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / length;
  }
  return out;
}

Vec interpolate(std::span<const double> u, std::span<const double> v, double alpha) {
  // (u, v, a) and (v, u, 1 - a) share one evaluation order, so the two agree bit for bit.
  if (alpha > 0.5) return interpolate(v, u, 1.0 - alpha);
  if (alpha == 0.0) return Vec(v.begin(), v.end());
  Vec mix(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mix[i] = alpha * u[i] + (1.0 - alpha) * v[i];
  if (std::fabs(alpha - 0.5) <= kUnitTolerance) {
    double antipodal = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) antipodal = std::max(antipodal, std::fabs(u[i] + v[i]));
    if (antipodal <= kUnitTolerance) return Vec(u.size(), 0.0);
  }
  return hat(mix);
}

Cap make_cap(Vec center, double radius) {
  if (std::fabs(norm(center) - 1.0) > kUnitTolerance) {
    throw Error(ErrorCode::kInvalidParameter, "cap center must be a unit vector");
  }
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidParameter, "cap radius must be > 0");
  return {std::move(center), radius};
}

bool cap_contains(const Cap& cap, std::span<const double> x) {
  const Vec xhat = hat(x);
  if (norm(xhat) == 0.0) return false;
  return chord(xhat, cap.center) < cap.radius;
}

Vec GreatArc::at(double t) const {
  Vec p(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) p[i] = std::cos(t) * from[i] + std::sin(t) * perp[i];
  return p;
}

std::vector<AngleArc> planar_cone_arcs(std::vector<double> angles, bool* full_circle) {
  if (full_circle != nullptr) *full_circle = false;
  if (angles.empty()) throw Error(ErrorCode::kInvalidInput, "planar cone needs at least one direction");
  for (double& a : angles) a = wrap_angle(a);
  std::sort(angles.begin(), angles.end());
  std::vector<double> unique;
  for (double a : angles) {
    if (unique.empty() || a - unique.back() > kAngleTolerance) unique.push_back(a);
  }
  if (unique.size() > 1 && unique.front() + kTwoPi - unique.back() <= kAngleTolerance) unique.pop_back();
  const std::size_t n = unique.size();
  if (n == 1) return {{unique[0], 0.0}};

  std::vector<double> gaps(n);
  for (std::size_t i = 0; i < n; ++i) {
    gaps[i] = i + 1 < n ? unique[i + 1] - unique[i] : unique[0] + kTwoPi - unique[i];
  }
  std::size_t widest = 0;
  std::size_t half_turns = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (gaps[i] > gaps[widest]) widest = i;
    if (gaps[i] >= std::numbers::pi - kAngleTolerance) ++half_turns;
  }
  if (half_turns == 0) {
    if (full_circle != nullptr) *full_circle = true;
    return {{0.0, kTwoPi}};
  }
  if (half_turns >= 2) {
    // Exactly two antipodal directions: the cone is a line.
    return {{unique[0], 0.0}, {unique[1], 0.0}};
  }
  const double start = unique[(widest + 1) % n];
  return {{start, kTwoPi - gaps[widest]}};
}

double nnls_residual(const std::vector<Vec>& columns, std::span<const double> y_span, Vec* solution) {
  const std::size_t d = y_span.size();
  const std::size_t m = columns.size();
  const Eigen::MatrixXd a = as_matrix(columns, d);
  Eigen::VectorXd y(d);
  for (std::size_t i = 0; i < d; ++i) y(i) = y_span[i];
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(m, false);
  constexpr double kEps = 1e-13;

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> idx;
    for (std::size_t j = 0; j < m; ++j) {
      if (passive[j]) idx.push_back(static_cast<Eigen::Index>(j));
    }
    s = Eigen::VectorXd::Zero(m);
    if (idx.empty()) return;
    Eigen::MatrixXd ap(d, idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c) ap.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    const Eigen::VectorXd sp = ap.colPivHouseholderQr().solve(y);
    for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = sp(static_cast<Eigen::Index>(c));
  };

  for (std::size_t outer = 0; outer < 3 * m + 10; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (y - a * x);
    Eigen::Index best = -1;
    double best_w = kEps;
    for (std::size_t j = 0; j < m; ++j) {
      if (!passive[j] && w(static_cast<Eigen::Index>(j)) > best_w) {
        best_w = w(static_cast<Eigen::Index>(j));
        best = static_cast<Eigen::Index>(j);
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    Eigen::VectorXd s;
    for (std::size_t inner = 0; inner < 3 * m + 10; ++inner) {
      solve_passive(s);
      double step = 1.0;
      bool feasible = true;
      for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (passive[j] && s(jj) <= 0.0) {
          feasible = false;
          const double denom = x(jj) - s(jj);
          if (denom > 0.0) step = std::min(step, x(jj) / denom);
        }
      }
      if (feasible) break;
      x += step * (s - x);
      for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        if (passive[j] && x(jj) <= kEps) {
          passive[j] = false;
          x(jj) = 0.0;
        }
      }
    }
    x = s.cwiseMax(0.0);
  }
  if (solution != nullptr) solution->assign(x.data(), x.data() + m);
  return (a * x - y).norm();
}

SHull SHull::build(std::vector<Vec> generators) {
  if (generators.empty()) throw Error(ErrorCode::kInvalidInput, "s-hull needs at least one generator");
  SHull h;
  h.dimension_ = generators.front().size();
  if (h.dimension_ == 0) throw Error(ErrorCode::kInvalidInput, "generators must have dimension >= 1");
  for (const Vec& g : generators) {
    if (g.size() != h.dimension_) throw Error(ErrorCode::kInvalidInput, "generators must share one dimension");
    if (std::fabs(norm(g) - 1.0) > kUnitTolerance) {
      throw Error(ErrorCode::kInvalidInput, "generators must be unit vectors");
    }
  }
  h.generators_ = std::move(generators);
  const std::size_t d = h.dimension_;
  h.rank_ = matrix_rank(h.generators_, d);

  if (d == 2) {
    std::vector<double> angles;
    for (const Vec& g : h.generators_) angles.push_back(std::atan2(g[1], g[0]));
    bool full = false;
    h.arcs_ = planar_cone_arcs(angles, &full);
    h.full_sphere_ = full;
    h.origin_in_hull_ = full || (h.arcs_.size() == 2) ||
                        (h.arcs_.size() == 1 && h.arcs_[0].length >= std::numbers::pi - kAngleTolerance);
    return h;
  }

  for (const Vec& g : h.generators_) {
    Vec minus(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) minus[i] = -g[i];
    if (nnls_residual(h.generators_, minus) <= kMembershipTolerance) {
      h.origin_in_hull_ = true;
      break;
    }
  }

  if (d == 3 && h.rank_ == 3) {
    const auto& g = h.generators_;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        Vec c = cross(g[i], g[j]);
        const double length = norm(c);
        if (length < 1e-12) continue;
        for (double& x : c) x /= length;
        bool all_above = true;
        bool all_below = true;
        for (const Vec& v : g) {
          const double s = dot(v, c);
          all_above &= s >= -kMembershipTolerance;
          all_below &= s <= kMembershipTolerance;
        }
        if (!all_above && !all_below) continue;
        if (!all_above) {
          for (double& x : c) x = -x;
        }
        const bool seen = std::any_of(h.facet_normals_.begin(), h.facet_normals_.end(),
                                      [&](const Vec& n) { return chord(n, c) < kMembershipTolerance; });
        if (!seen) h.facet_normals_.push_back(std::move(c));
      }
    }
    h.full_sphere_ = h.facet_normals_.empty();
    return h;
  }

  if (h.rank_ == d && h.origin_in_hull_) {
    bool all_axes = true;
    for (std::size_t axis = 0; axis < d && all_axes; ++axis) {
      for (double sign : {1.0, -1.0}) {
        if (nnls_residual(h.generators_, unit_vector(d, axis, sign)) > kMembershipTolerance) {
          all_axes = false;
          break;
        }
      }
    }
    h.full_sphere_ = all_axes;
  }
  return h;
}

bool SHull::contains(std::span<const double> w, double tolerance) const {
  if (w.size() != dimension_) throw Error(ErrorCode::kInvalidInput, "query dimension does not match the hull");
  const double length = norm(w);
  if (length == 0.0) return false;
  if (full_sphere_) return true;
  Vec unit(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) unit[i] = w[i] / length;
  if (dimension_ == 2) return arcs_contain(arcs_, std::atan2(unit[1], unit[0]), tolerance);
  if (dimension_ == 3 && rank_ == 3) {
    return std::all_of(facet_normals_.begin(), facet_normals_.end(),
                       [&](const Vec& n) { return dot(n, unit) >= -tolerance; });
  }
  return nnls_residual(generators_, unit) <= tolerance;
}

nlohmann::json SHull::arcs_json() const {
  if (dimension_ != 2) throw Error(ErrorCode::kUnsupportedDimension, "arc output is defined for d = 2 only");
  nlohmann::json out = nlohmann::json::array();
  if (full_sphere_) {
    out.push_back({0.0, std::numbers::pi});
    out.push_back({std::numbers::pi, 0.0});
    return out;
  }
  for (const AngleArc& arc : arcs_) out.push_back({arc.start, wrap_angle(arc.start + arc.length)});
  return out;
}

SHull s_hull(std::vector<Vec> generators) { return SHull::build(std::move(generators)); }

bool s_hull_contains(const SHull& h, std::span<const double> w) { return h.contains(w); }

SBoundary s_boundary(const SHull& h) {
  const std::size_t d = h.dimension();
  if (d >= 4) throw Error(ErrorCode::kUnsupportedDimension, "s-boundary is available for d = 2 and d = 3 only");
  SBoundary out;
  if (h.full_sphere()) return out;
  if (d == 1) {
    for (const Vec& g : h.generators()) {
      if (std::none_of(out.points.begin(), out.points.end(), [&](const Vec& p) { return chord(p, g) < 1e-9; })) {
        out.points.push_back(g);
      }
    }
    return out;
  }
  if (d == 2) {
    // Arc endpoints are generator directions; report the generator itself.
    auto endpoint = [&](double angle) {
      Vec p{std::cos(angle), std::sin(angle)};
      for (const Vec& g : h.generators()) {
        if (chord(g, p) < 1e-12) return g;
      }
      return p;
    };
    for (const AngleArc& arc : h.arcs()) {
      out.points.push_back(endpoint(arc.start));
      if (arc.length > 0.0) out.points.push_back(endpoint(arc.start + arc.length));
    }
    return out;
  }

  const std::vector<Vec>& g = h.generators();
  if (h.rank() == 1) {
    for (const Vec& v : g) {
      if (std::none_of(out.points.begin(), out.points.end(), [&](const Vec& p) { return chord(p, v) < 1e-9; })) {
        out.points.push_back(v);
      }
    }
    return out;
  }
  if (h.rank() == 2) {
    // A planar set on S^2 has empty relative interior: it is its own boundary.
    const Vec& a = g.front();
    Vec n;
    for (const Vec& v : g) {
      n = cross(a, v);
      if (norm(n) > 1e-9) break;
    }
    n = hat(n);
    lift_planar(g, a, hat(cross(n, a)), out);
    return out;
  }
  for (const Vec& n : h.facet_normals()) {
    std::vector<Vec> on_plane;
    for (const Vec& v : g) {
      if (std::fabs(dot(v, n)) <= kMembershipTolerance) on_plane.push_back(v);
    }
    const Vec& a = on_plane.front();
    lift_planar(on_plane, a, hat(cross(n, a)), out);
  }
  return out;
}

std::vector<Vec> direction_grid(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d == 0 || m == 0) throw Error(ErrorCode::kInvalidParameter, "direction grid needs d >= 1 and M >= 1");
  std::vector<Vec> grid;
  if (d == 1) {
    for (std::size_t k = 0; k < m; ++k) grid.push_back({k % 2 == 0 ? 1.0 : -1.0});
    return grid;
  }
  if (d == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
      grid.push_back({std::cos(theta), std::sin(theta)});
    }
    // Exact axes where the angle is a multiple of pi/2.
    for (Vec& u : grid) {
      for (double& x : u) {
        if (std::fabs(x) < 1e-15) x = 0.0;
      }
    }
    return grid;
  }
  RandomStream rng(seed);
  const std::size_t pool_size = 32 * m;
  std::vector<Vec> pool;
  pool.reserve(pool_size);
  while (pool.size() < pool_size) {
    Vec v(d);
    for (double& x : v) x = rng.normal();
    if (norm(v) < 1e-6) continue;
    pool.push_back(hat(v));
  }
  std::vector<double> nearest(pool_size, std::numeric_limits<double>::infinity());
  std::size_t pick = 0;
  for (std::size_t k = 0; k < m; ++k) {
    grid.push_back(pool[pick]);
    std::size_t next = 0;
    double farthest = -1.0;
    for (std::size_t i = 0; i < pool_size; ++i) {
      nearest[i] = std::min(nearest[i], chord(pool[i], pool[pick]));
      if (nearest[i] > farthest) {
        farthest = nearest[i];
        next = i;
      }
    }
    pick = next;
  }
  return grid;
}

}  // namespace rwdir
