#include "rwdir/hull.hpp"

#include <algorithm>
#include <cmath>

#include "rwdir/error.hpp"

namespace rwdir {

namespace {

__extension__ typedef __int128 I128;

int cross_sign(const std::array<std::int64_t, 2>& o, const std::array<std::int64_t, 2>& a,
               const std::array<std::int64_t, 2>& b) {
  const I128 v = (I128(a[0]) - o[0]) * (I128(b[1]) - o[1]) - (I128(a[1]) - o[1]) * (I128(b[0]) - o[0]);
  return (v > 0) - (v < 0);
}

int cross_sign(const std::array<double, 2>& o, const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double v = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  return (v > 0.0) - (v < 0.0);
}

template <typename P>
std::vector<P> monotone_chain(std::vector<P> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() <= 2) return points;
  std::vector<P> hull(2 * points.size());
  std::size_t k = 0;
  for (const P& p : points) {
    while (k >= 2 && cross_sign(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = points.size() - 1; i-- > 0;) {
    while (k >= lower && cross_sign(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::array<double, 2> as_double(const std::array<std::int64_t, 2>& p) {
  return {static_cast<double>(p[0]), static_cast<double>(p[1])};
}

double origin_segment_distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double len2 = ex * ex + ey * ey;
  double t = len2 > 0.0 ? -(a[0] * ex + a[1] * ey) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(a[0] + t * ex, a[1] + t * ey);
}

}  // namespace

std::vector<std::array<double, 2>> convex_hull_2d(std::vector<std::array<double, 2>> points) {
  return monotone_chain(std::move(points));
}

std::vector<std::array<std::int64_t, 2>> convex_hull_2d(std::vector<std::array<std::int64_t, 2>> points) {
  return monotone_chain(std::move(points));
}

double polygon_inscribed_radius(const std::vector<std::array<double, 2>>& polygon) {
  const std::size_t m = polygon.size();
  if (m < 3) return 0.0;
  const std::array<double, 2> origin{0.0, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    if (cross_sign(polygon[i], polygon[(i + 1) % m], origin) <= 0) return 0.0;
  }
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) r = std::min(r, origin_segment_distance(polygon[i], polygon[(i + 1) % m]));
  return r;
}

HullState::HullState(std::size_t dimension, std::vector<Vec> tracked, bool lattice, std::size_t support_directions,
                     std::uint64_t support_seed)
    : dimension_(dimension), lattice_(lattice), tracked_(std::move(tracked)) {
  if (dimension_ < 2) throw Error(ErrorCode::kInvalidParameter, "hull tracking needs d >= 2");
  for (const Vec& u : tracked_) {
    if (u.size() != dimension_) throw Error(ErrorCode::kInvalidInput, "tracked directions must match the dimension");
  }
  confinement_.assign(tracked_.size(), 0.0);
  if (dimension_ == 2) {
    lattice_polygon_ = {{0, 0}};
    real_polygon_ = {{0.0, 0.0}};
  } else {
    support_grid_ = direction_grid(dimension_, support_directions, support_seed);
    support_.assign(support_grid_.size(), 0.0);
    support_points_.assign(support_grid_.size(), Vec(dimension_, 0.0));
  }
}

void HullState::track(std::span<const double> p) {
  ++points_seen_;
  for (std::size_t i = 0; i < tracked_.size(); ++i) confinement_[i] = std::min(confinement_[i], dot(p, tracked_[i]));
}

void HullState::update(const std::vector<Vec>& batch) {
  if (batch.empty()) return;
  if (lattice_ && dimension_ == 2) {
    std::vector<std::vector<std::int64_t>> converted;
    for (const Vec& p : batch) converted.push_back({std::llround(p[0]), std::llround(p[1])});
    update_lattice(converted);
    return;
  }
  for (const Vec& p : batch) {
    if (p.size() != dimension_) throw Error(ErrorCode::kInvalidInput, "hull point has the wrong dimension");
    track(p);
  }
  if (dimension_ == 2) {
    std::vector<std::array<double, 2>> points = real_polygon_;
    for (const Vec& p : batch) points.push_back({p[0], p[1]});
    real_polygon_ = convex_hull_2d(std::move(points));
  } else {
    for (const Vec& p : batch) {
      for (std::size_t k = 0; k < support_grid_.size(); ++k) {
        const double h = dot(p, support_grid_[k]);
        if (h > support_[k]) {
          support_[k] = h;
          support_points_[k] = p;
        }
      }
    }
  }
  refresh_radius();
}

void HullState::update_lattice(const std::vector<std::vector<std::int64_t>>& batch) {
  if (batch.empty()) return;
  if (!lattice_ || dimension_ != 2) {
    std::vector<Vec> converted;
    for (const auto& p : batch) converted.emplace_back(p.begin(), p.end());
    const bool saved = lattice_;
    lattice_ = false;
    update(converted);
    lattice_ = saved;
    return;
  }
  std::vector<std::array<std::int64_t, 2>> points = lattice_polygon_;
  for (const auto& p : batch) {
    if (p.size() != 2) throw Error(ErrorCode::kInvalidInput, "hull point has the wrong dimension");
    const double as_real[2] = {static_cast<double>(p[0]), static_cast<double>(p[1])};
    track(as_real);
    points.push_back({p[0], p[1]});
  }
  lattice_polygon_ = convex_hull_2d(std::move(points));
  refresh_radius();
}

void HullState::refresh_radius() {
  double r = 0.0;
  if (dimension_ == 2) {
    if (lattice_) {
      const std::size_t m = lattice_polygon_.size();
      bool inside = m >= 3;
      const std::array<std::int64_t, 2> origin{0, 0};
      for (std::size_t i = 0; inside && i < m; ++i) {
        inside = cross_sign(lattice_polygon_[i], lattice_polygon_[(i + 1) % m], origin) > 0;
      }
      if (inside) {
        r = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
          r = std::min(r, origin_segment_distance(as_double(lattice_polygon_[i]), as_double(lattice_polygon_[(i + 1) % m])));
        }
      }
    } else {
      r = polygon_inscribed_radius(real_polygon_);
    }
  } else {
    r = std::max(0.0, *std::min_element(support_.begin(), support_.end()));
  }
  // The true radius never shrinks; clamping absorbs rounding in the distances.
  radius_ = std::max(radius_, r);
}

double HullState::confinement(std::span<const double> u) const {
  for (std::size_t i = 0; i < tracked_.size(); ++i) {
    if (chord(tracked_[i], u) <= 1e-12) return confinement_[i];
  }
  throw Error(ErrorCode::kInvalidInput, "direction is not tracked by this hull");
}

std::size_t HullState::vertex_count() const { return vertices().size(); }

std::vector<Vec> HullState::vertices() const {
  std::vector<Vec> out;
  if (dimension_ == 2) {
    if (lattice_) {
      for (const auto& p : lattice_polygon_) out.push_back({static_cast<double>(p[0]), static_cast<double>(p[1])});
    } else {
      for (const auto& p : real_polygon_) out.push_back({p[0], p[1]});
    }
    return out;
  }
  for (const Vec& p : support_points_) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

bool HullState::contains(std::span<const double> x, double tolerance) const {
  if (x.size() != dimension_) throw Error(ErrorCode::kInvalidInput, "query has the wrong dimension");
  if (dimension_ != 2) {
    for (std::size_t k = 0; k < support_grid_.size(); ++k) {
      if (dot(x, support_grid_[k]) > support_[k] + tolerance) return false;
    }
    return true;
  }
  const std::vector<Vec> poly = vertices();
  const std::size_t m = poly.size();
  if (m == 1) return std::hypot(x[0] - poly[0][0], x[1] - poly[0][1]) <= tolerance;
  if (m == 2) {
    const std::array<double, 2> a{poly[0][0] - x[0], poly[0][1] - x[1]};
    const std::array<double, 2> b{poly[1][0] - x[0], poly[1][1] - x[1]};
    return origin_segment_distance(a, b) <= tolerance;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& a = poly[i];
    const Vec& b = poly[(i + 1) % m];
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    const double c = ex * (x[1] - a[1]) - ey * (x[0] - a[0]);
    if (c < -tolerance * std::hypot(ex, ey)) return false;
  }
  return true;
}

HullTracker::HullTracker(std::size_t dimension, std::vector<Vec> tracked, bool lattice, std::size_t batch_size)
    : hull_(dimension, std::move(tracked), lattice), batch_size_(std::max<std::size_t>(1, batch_size)) {}

void HullTracker::observe(const StepView& view) {
  if (hull_.lattice() && view.state != nullptr && view.state->lattice) {
    pending_lattice_.push_back(view.state->lattice_position);
    if (pending_lattice_.size() >= batch_size_) flush();
  } else {
    pending_.emplace_back(view.position.begin(), view.position.end());
    if (pending_.size() >= batch_size_) flush();
  }
}

void HullTracker::flush() {
  if (!pending_lattice_.empty()) {
    hull_.update_lattice(pending_lattice_);
    pending_lattice_.clear();
  }
  if (!pending_.empty()) {
    hull_.update(pending_);
    pending_.clear();
  }
}

void HullTracker::checkpoint(const StepView& view) {
  flush();
  series_.push_back({view.n, hull_.inscribed_radius(), hull_.vertex_count(), hull_.confinement_values()});
}

void HullTracker::finish(const StepView&) { flush(); }

HullGrowthReport hull_growth_report(const std::vector<Vec>& tracked, const std::vector<HullSample>& series) {
  HullGrowthReport report;
  report.tracked = tracked;
  report.series = series;
  const std::size_t j = series.size();
  for (std::size_t i = std::max<std::size_t>(1, j / 2); i < j; ++i) {
    if (series[i].radius > series[i - 1].radius) ++report.growth_events;
  }
  report.full_space_trend = report.growth_events >= 3;
  if (j >= 3) {
    const bool radius_frozen = series[j - 1].radius == series[j - 3].radius;
    for (std::size_t k = 0; k < tracked.size(); ++k) {
      if (series[j - 1].confinement[k] == series[j - 2].confinement[k] &&
          series[j - 2].confinement[k] == series[j - 3].confinement[k]) {
        report.confined_directions.push_back(k);
      }
    }
    report.confined = radius_frozen && !report.confined_directions.empty();
  }
  return report;
}

HullGrowthReport hull_growth_report(const HullTracker& tracker) {
  return hull_growth_report(tracker.hull().tracked(), tracker.series());
}

std::string HullGrowthReport::to_csv() const {
  std::string out = "n,r_n,vertices";
  for (std::size_t k = 0; k < tracked.size(); ++k) out += ",conf_" + std::to_string(k);
  out += '\n';
  for (const HullSample& s : series) {
    out += std::to_string(s.n) + ',' + format_double(s.radius) + ',' + std::to_string(s.vertices);
    for (double c : s.confinement) out += ',' + format_double(c);
    out += '\n';
  }
  return out;
}

nlohmann::json HullGrowthReport::to_json() const {
  return {
      {"full_space_trend", full_space_trend},
      {"confined", confined},
      {"confined_directions", confined_directions},
      {"growth_events", growth_events},
      {"final_radius", series.empty() ? 0.0 : series.back().radius},
  };
}

}  // namespace rwdir
