#include "rwdir/direction_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rwdir/error.hpp"

namespace rwdir {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void config_error(std::string_view path, const char* field, const char* what) {
  throw Error(ErrorCode::kInvalidConfig, std::string(path) + "." + field + ": " + what);
}

std::size_t dyadic_scale(std::uint64_t n) {
  std::size_t j = 0;
  while (n > 1) {
    n >>= 1;
    ++j;
  }
  return j;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kIn: return "IN";
    case Verdict::kOut: return "OUT";
    case Verdict::kUndecided: return "UNDECIDED";
  }
  return "?";
}

void EstimatorConfig::validate(std::string_view path) const {
  if (!(cap_radius > 0.0) || !std::isfinite(cap_radius)) config_error(path, "cap_radius", "must be > 0");
  if (!(r0 > 0.0) || !std::isfinite(r0)) config_error(path, "r0", "must be > 0");
  if (levels > 200) config_error(path, "levels", "must be <= 200");
  if (v_min < 1) config_error(path, "v_min", "must be >= 1");
  if (min_top_level > levels) config_error(path, "min_top_level", "must be <= levels");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) config_error(path, "kappa", "must be > 0");
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) config_error(path, "alphas", "entries must be > 0");
  }
}

nlohmann::json EstimatorConfig::to_json() const {
  return {
      {"cap_radius", cap_radius}, {"r0", r0},       {"levels", levels},
      {"burn_in", burn_in},       {"v_min", v_min}, {"l_out", l_out},
      {"min_top_level", min_top_level},             {"alphas", alphas},
      {"kappa", kappa},
  };
}

CapVisitAccumulator::CapVisitAccumulator(std::vector<Vec> grid, EstimatorConfig config)
    : grid_(std::move(grid)), config_(std::move(config)) {
  if (grid_.empty()) throw Error(ErrorCode::kInvalidInput, "direction grid is empty");
  config_.validate();
  dimension_ = grid_.front().size();
  for (const Vec& u : grid_) {
    if (u.size() != dimension_) throw Error(ErrorCode::kInvalidInput, "grid points must share one dimension");
  }
  level_count_ = config_.levels + 1;
  // ||x - u|| < r  <=>  x.u > 1 - r^2/2 for unit x, u.
  cos_threshold_ = 1.0 - config_.cap_radius * config_.cap_radius / 2.0;
  log_r0_ = std::log(config_.r0);
  for (std::size_t l = 0; l < level_count_; ++l) level_radius_.push_back(std::ldexp(config_.r0, static_cast<int>(l)));
  visits_.assign(grid_.size() * level_count_, 0);
  first_visit_.assign(grid_.size() * level_count_, 0);
  graded_.assign(grid_.size() * config_.alphas.size() * kScales, kNegInf);
}

void CapVisitAccumulator::observe(const StepView& view) {
  record(view.direction, view.norm.to_double(), view.log_norm, view.n);
}

void CapVisitAccumulator::record_visit(std::span<const double> s, std::uint64_t n) {
  const Vec direction = hat(s);
  const double length = norm(s);
  record(direction, length, length > 0.0 ? std::log(length) : kNegInf, n);
}

void CapVisitAccumulator::record_visit(std::span<const double> direction, double log_norm, std::uint64_t n) {
  record(direction, std::exp(log_norm), log_norm, n);
}

void CapVisitAccumulator::record(std::span<const double> direction, double length, double log_norm,
                                 std::uint64_t n) {
  ++steps_recorded_;
  last_n_ = std::max(last_n_, n);
  if (n < config_.burn_in || log_norm == kNegInf || n == 0) return;

  // Highest level l with |S_n| > R_l, or -1.
  int top = -1;
  if (std::isfinite(length)) {
    while (top + 1 < static_cast<int>(level_count_) && length > level_radius_[static_cast<std::size_t>(top + 1)]) ++top;
  } else {
    top = static_cast<int>(level_count_) - 1;
  }

  const std::size_t n_alpha = config_.alphas.size();
  const bool graded = n_alpha > 0;
  if (top < 0 && !graded) return;
  const double log_n = std::log(static_cast<double>(n));
  const std::size_t scale = std::min(dyadic_scale(n), kScales - 1);

  for (std::size_t p = 0; p < grid_.size(); ++p) {
    if (dot(direction, grid_[p]) <= cos_threshold_) continue;
    for (int l = 0; l <= top; ++l) {
      const std::size_t cell = p * level_count_ + static_cast<std::size_t>(l);
      if (visits_[cell]++ == 0) first_visit_[cell] = n;
    }
    for (std::size_t a = 0; a < n_alpha; ++a) {
      double& slot = graded_[(p * n_alpha + a) * kScales + scale];
      slot = std::max(slot, log_norm - config_.alphas[a] * log_n);
    }
  }
}

DirectionSetEstimate CapVisitAccumulator::finalize() const {
  if (steps_recorded_ == 0) throw Error(ErrorCode::kInvalidState, "accumulator has recorded no steps");
  DirectionSetEstimate est;
  est.grid = grid_;
  est.config = config_;
  est.seed = seed_;
  est.stream = stream_;
  est.n_steps = last_n_;
  const std::size_t n_alpha = config_.alphas.size();
  for (double a : config_.alphas) est.expected_full.push_back(dimension_ >= 3 && a < 0.5);
  const double log_kappa = std::log(config_.kappa);
  // Only the upper half of the reached dyadic scales count.
  const std::size_t last_scale = std::min(dyadic_scale(last_n_), kScales - 1);
  const std::size_t first_late = (last_scale + 1) / 2;

  est.points.resize(grid_.size());
  for (std::size_t p = 0; p < grid_.size(); ++p) {
    PointEstimate& pe = est.points[p];
    for (std::size_t l = 0; l < level_count_; ++l) {
      pe.visits.push_back(visits_[p * level_count_ + l]);
      pe.first_visit.push_back(first_visit_[p * level_count_ + l]);
      if (pe.visits.back() > 0) pe.top_level = static_cast<int>(l);
    }
    est.top_level = std::max(est.top_level, pe.top_level);
    for (std::size_t a = 0; a < n_alpha; ++a) {
      double best = kNegInf;
      std::size_t above = 0;
      for (std::size_t j = 0; j < kScales; ++j) {
        const double v = graded_[(p * n_alpha + a) * kScales + j];
        best = std::max(best, v);
        if (j >= first_late && v > log_kappa) ++above;
      }
      pe.graded_log_max.push_back(best);
      pe.graded_scales.push_back(above);
      pe.graded.push_back(above >= 2 ? Verdict::kIn : above == 1 ? Verdict::kUndecided : Verdict::kOut);
    }
  }

  const int top = est.top_level;
  for (PointEstimate& pe : est.points) {
    if (top >= 0 && top >= static_cast<int>(config_.min_top_level) && pe.top_level == top &&
        pe.visits[static_cast<std::size_t>(top)] >= config_.v_min) {
      pe.verdict = Verdict::kIn;
    } else if (pe.top_level <= static_cast<int>(config_.l_out)) {
      pe.verdict = Verdict::kOut;
    } else {
      pe.verdict = Verdict::kUndecided;
    }
  }
  return est;
}

DirectionSetEstimate finalize(const CapVisitAccumulator& acc) { return acc.finalize(); }

std::size_t DirectionSetEstimate::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [v](const PointEstimate& p) { return p.verdict == v; }));
}

double DirectionSetEstimate::coverage() const {
  return points.empty() ? 0.0 : static_cast<double>(count(Verdict::kIn)) / static_cast<double>(points.size());
}

std::string DirectionSetEstimate::to_csv() const {
  const std::size_t d = grid.empty() ? 0 : grid.front().size();
  std::string out = "index";
  for (std::size_t i = 1; i <= d; ++i) out += ",u_" + std::to_string(i);
  out += ",verdict,top_level";
  for (std::size_t l = 0; l <= config.levels; ++l) out += ",visits_" + std::to_string(l);
  for (double a : config.alphas) {
    const std::string tag = format_double(a);
    out += ",max_ratio_" + tag + ",graded_" + tag;
  }
  out += '\n';
  for (std::size_t p = 0; p < points.size(); ++p) {
    const PointEstimate& pe = points[p];
    out += std::to_string(p);
    for (double x : grid[p]) out += ',' + format_double(x);
    out += ',' + std::string(to_string(pe.verdict)) + ',' + std::to_string(pe.top_level);
    for (std::uint64_t v : pe.visits) out += ',' + std::to_string(v);
    for (std::size_t a = 0; a < config.alphas.size(); ++a) {
      out += ',';
      out += pe.graded_log_max[a] == kNegInf ? std::string("0") : ExtReal::from_log(pe.graded_log_max[a]).to_string();
      out += ',' + std::string(to_string(pe.graded[a]));
      if (expected_full[a]) out += "(EXPECTED_FULL)";
    }
    out += '\n';
  }
  return out;
}

nlohmann::json DirectionSetEstimate::to_json() const {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const PointEstimate& pe : points) verdicts.push_back(std::string(to_string(pe.verdict)));
  return {
      {"seed", seed},
      {"stream", stream},
      {"n_steps", n_steps},
      {"top_level", top_level},
      {"coverage", coverage()},
      {"in", count(Verdict::kIn)},
      {"out", count(Verdict::kOut)},
      {"undecided", count(Verdict::kUndecided)},
      {"verdicts", std::move(verdicts)},
      {"thresholds", config.to_json()},
  };
}

Consensus combine_runs(std::span<const DirectionSetEstimate> estimates) {
  if (estimates.empty()) throw Error(ErrorCode::kInvalidInput, "combine_runs needs at least one estimate");
  const std::vector<Vec>& grid = estimates.front().grid;
  for (const DirectionSetEstimate& e : estimates) {
    if (e.grid != grid || e.points.size() != grid.size()) {
      throw Error(ErrorCode::kInvalidInput, "estimates were computed on different grids");
    }
  }
  Consensus c;
  c.grid = grid;
  c.runs = estimates.size();
  const std::size_t m = grid.size();
  std::size_t consensus_in = 0;
  std::size_t union_in = 0;
  double agreement_sum = 0.0;
  std::size_t agreement_points = 0;
  for (std::size_t p = 0; p < m; ++p) {
    std::size_t in = 0;
    std::size_t out = 0;
    for (const DirectionSetEstimate& e : estimates) {
      in += e.points[p].verdict == Verdict::kIn;
      out += e.points[p].verdict == Verdict::kOut;
    }
    const std::size_t decided = in + out;
    Verdict v = Verdict::kUndecided;
    if (in > out) v = Verdict::kIn;
    if (out > in) v = Verdict::kOut;
    double agreement = 1.0;
    if (decided > 0) {
      agreement = static_cast<double>(std::max(in, out)) / static_cast<double>(decided);
      agreement_sum += agreement;
      ++agreement_points;
    }
    c.verdicts.push_back(v);
    c.agreement.push_back(agreement);
    c.decided_runs.push_back(decided);
    c.in_runs.push_back(in);
    consensus_in += v == Verdict::kIn;
    union_in += in > 0;
  }
  c.mean_agreement = agreement_points > 0 ? agreement_sum / static_cast<double>(agreement_points) : 1.0;
  c.coverage = static_cast<double>(consensus_in) / static_cast<double>(m);
  c.union_coverage = static_cast<double>(union_in) / static_cast<double>(m);
  for (const DirectionSetEstimate& e : estimates) c.run_coverage.push_back(e.coverage());
  return c;
}

std::string Consensus::to_csv() const {
  const std::size_t d = grid.empty() ? 0 : grid.front().size();
  std::string out = "index";
  for (std::size_t i = 1; i <= d; ++i) out += ",u_" + std::to_string(i);
  out += ",verdict,agreement,decided_runs,in_runs\n";
  for (std::size_t p = 0; p < grid.size(); ++p) {
    out += std::to_string(p);
    for (double x : grid[p]) out += ',' + format_double(x);
    out += ',' + std::string(to_string(verdicts[p])) + ',' + format_double(agreement[p]) + ',' +
           std::to_string(decided_runs[p]) + ',' + std::to_string(in_runs[p]) + '\n';
  }
  return out;
}

nlohmann::json Consensus::to_json() const {
  nlohmann::json verdict_list = nlohmann::json::array();
  for (Verdict v : verdicts) verdict_list.push_back(std::string(to_string(v)));
  return {
      {"runs", runs},
      {"verdicts", std::move(verdict_list)},
      {"agreement", agreement},
      {"mean_agreement", mean_agreement},
      {"coverage", coverage},
      {"union_coverage", union_coverage},
      {"run_coverage", run_coverage},
  };
}

}  // namespace rwdir
