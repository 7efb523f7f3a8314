// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1). Pass criterion ids to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rwdir/batch.hpp"
#include "rwdir/direction_estimator.hpp"
#include "rwdir/examples.hpp"
#include "rwdir/experiment.hpp"
#include "rwdir/hull.hpp"
#include "rwdir/projection.hpp"
#include "rwdir/pruitt.hpp"
#include "rwdir/samplers.hpp"
#include "rwdir/sphere.hpp"
#include "rwdir/walk.hpp"

#ifndef RWDIR_CONFIG_DIR
#define RWDIR_CONFIG_DIR "configs"
#endif

namespace {

using rwdir::CriterionResult;
using rwdir::Vec;

std::string fixed(double x, int digits = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

std::string sci(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

std::string ratio(std::size_t k, std::size_t n) { return std::to_string(k) + "/" + std::to_string(n); }

Vec random_unit(std::mt19937_64& gen, std::size_t d) {
  std::normal_distribution<double> normal;
  Vec v(d);
  double s = 0.0;
  do {
    s = 0.0;
    for (double& x : v) {
      x = normal(gen);
      s += x * x;
    }
  } while (s < 1e-20);
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

CriterionResult criterion_1() {
  CriterionResult r{"C1", "exact geometry: inscribed radius, antipodal interpolation, chord identity", true, ""};
  rwdir::HullState hull(2, {}, false);
  hull.update({{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}});
  const double radius_error = std::fabs(hull.inscribed_radius() - 1.0 / std::sqrt(2.0));
  const Vec mid = rwdir::interpolate(Vec{1.0, 0.0}, Vec{-1.0, 0.0}, 0.5);
  const bool mid_zero = mid[0] == 0.0 && mid[1] == 0.0;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_int_distribution<std::size_t> dim(2, 6);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t d = dim(gen);
    Vec x = random_unit(gen, d);
    const double s = scale(gen);
    for (double& c : x) c *= s;
    const Vec u = random_unit(gen, d);
    const Vec xh = rwdir::hat(x);
    const double lhs = std::pow(rwdir::chord(xh, u), 2);
    const double rhs = 2.0 - 2.0 * rwdir::dot(xh, u);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  r.pass = radius_error <= 1e-12 && mid_zero && worst <= 1e-9;
  r.detail = "radius error=" + sci(radius_error) + " interpolate(e1,-e1,1/2)=" + (mid_zero ? "0" : "nonzero") +
             " worst chord identity error=" + sci(worst);
  return r;
}

// Brute-force cone oracle built from the generators alone. Samples are
// normalized positive conical combinations: one in ten uses skewed random
// weights over a random subset (single generators and edges included); the
// rest are Gaussian directions in span(A) kept when their coefficients in some
// basis B of span(A) drawn from A are all nonnegative, which reaches
// directions that need near-cancellation between generators. Membership is
// exact by basis enumeration: x is in cone(A) iff it lies in cone(B) for a
// basis B of span(A) taken from A.
class ConeOracle {
 public:
  explicit ConeOracle(const std::vector<Vec>& generators) : generators_(generators) {
    d_ = generators.front().size();
    const std::size_t k = generators.size();
    Eigen::MatrixXd all(d_, k);
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < d_; ++i) all(idx(i), idx(c)) = generators[c][i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(all);
    lu.setThreshold(1e-10);
    rank_ = static_cast<std::size_t>(lu.rank());
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != rank_) continue;
      Eigen::MatrixXd b(d_, idx(rank_));
      Eigen::Index col = 0;
      for (std::size_t c = 0; c < k; ++c) {
        if (mask >> c & 1u) b.col(col++) = all.col(idx(c));
      }
      Eigen::FullPivLU<Eigen::MatrixXd> blu(b);
      blu.setThreshold(1e-10);
      if (static_cast<std::size_t>(blu.rank()) != rank_) continue;
      bases_.push_back(b);
      inverses_.push_back((b.transpose() * b).inverse() * b.transpose());
    }
    span_ = Eigen::HouseholderQR<Eigen::MatrixXd>(all).householderQ() * Eigen::MatrixXd::Identity(idx(d_), idx(rank_));
  }

  std::vector<Vec> sample(std::mt19937_64& gen, std::size_t count) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec> out;
    std::vector<std::size_t> order(generators_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    while (out.size() < count) {
      Vec s(d_, 0.0);
      if (out.size() % 10 == 0) {
        std::shuffle(order.begin(), order.end(), gen);
        const std::size_t m = 1 + static_cast<std::size_t>(unit(gen) * static_cast<double>(order.size())) % order.size();
        const double power = 1.0 + 3.0 * unit(gen);
        for (std::size_t j = 0; j < m; ++j) {
          const double w = std::pow(-std::log(1.0 - unit(gen)), power);
          for (std::size_t c = 0; c < d_; ++c) s[c] += w * generators_[order[j]][c];
        }
      } else {
        s = uniform_in_cone(gen);
      }
      if (rwdir::norm(s) < 1e-9) continue;
      out.push_back(rwdir::hat(s));
    }
    return out;
  }

  bool contains(const Vec& x) const {
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), idx(d_));
    for (std::size_t b = 0; b < bases_.size(); ++b) {
      const Eigen::VectorXd w = inverses_[b] * v;
      if (w.minCoeff() >= -1e-12 && (bases_[b] * w - v).norm() <= 1e-9) return true;
    }
    return false;
  }

 private:
  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

  // Uniform over cone(A) when it is wide enough for plain rejection,
  // otherwise uniform inside one random basis cone.
  Vec uniform_in_cone(std::mt19937_64& gen) const {
    std::normal_distribution<double> normal;
    auto draw = [&]() {
      Eigen::VectorXd z(idx(rank_));
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(gen);
      return Eigen::VectorXd(span_ * z);
    };
    auto in_basis = [&](const Eigen::VectorXd& x, std::size_t b) { return (inverses_[b] * x).minCoeff() >= 0.0; };
    auto to_vec = [&](const Eigen::VectorXd& x) { return Vec(x.data(), x.data() + x.size()); };
    for (int attempt = 0; attempt < 64; ++attempt) {
      const Eigen::VectorXd x = draw();
      for (std::size_t b = 0; b < bases_.size(); ++b) {
        if (in_basis(x, b)) return to_vec(x);
      }
    }
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, bases_.size() - 1)(gen);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const Eigen::VectorXd x = draw();
      if (in_basis(x, pick)) return to_vec(x);
    }
    return Vec(d_, 0.0);
  }

  std::vector<Vec> generators_;
  std::size_t d_ = 0;
  std::size_t rank_ = 0;
  std::vector<Eigen::MatrixXd> bases_;
  std::vector<Eigen::MatrixXd> inverses_;
  Eigen::MatrixXd span_;
};

CriterionResult criterion_2() {
  CriterionResult r{"C2", "s-hull membership vs brute-force conical-combination oracle (200 sets, d in {2,3,4})", true, ""};
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  std::normal_distribution<double> jitter(0.0, 0.08);
  std::size_t false_negatives = 0;
  std::size_t probes[5] = {0, 0, 0, 0, 0};
  std::size_t rejected[5] = {0, 0, 0, 0, 0};
  std::size_t accepted_members[5] = {0, 0, 0, 0, 0};
  for (int set = 0; set < 200; ++set) {
    const std::size_t d = 2 + static_cast<std::size_t>(set % 3);
    std::vector<Vec> generators;
    const std::size_t k = size(gen);
    for (std::size_t i = 0; i < k; ++i) generators.push_back(random_unit(gen, d));
    const rwdir::SHull hull = rwdir::s_hull(generators);
    const ConeOracle oracle(generators);
    const std::vector<Vec> samples = oracle.sample(gen, 10000);
    for (const Vec& s : samples) false_negatives += !hull.contains(s);
    // Probes: uniform points plus points jittered off the sampled set.
    std::vector<Vec> candidates;
    for (int i = 0; i < 200; ++i) candidates.push_back(random_unit(gen, d));
    for (int i = 0; i < 200; ++i) {
      Vec p = samples[static_cast<std::size_t>(i) * 37 % samples.size()];
      for (double& c : p) c += jitter(gen);
      if (rwdir::norm(p) > 1e-9) candidates.push_back(rwdir::hat(p));
    }
    for (const Vec& p : candidates) {
      double nearest = 2.0;
      for (const Vec& s : samples) {
        nearest = std::min(nearest, rwdir::chord(p, s));
        if (nearest <= 0.05) break;
      }
      if (nearest <= 0.05) continue;
      ++probes[d];
      if (hull.contains(p)) {
        accepted_members[d] += oracle.contains(p);
      } else {
        ++rejected[d];
      }
    }
  }
  bool ok = false_negatives == 0;
  std::string detail = "false negatives=" + std::to_string(false_negatives);
  for (std::size_t d = 2; d <= 4; ++d) {
    const double share = probes[d] ? static_cast<double>(rejected[d]) / static_cast<double>(probes[d]) : 1.0;
    ok &= d == 2 ? rejected[d] == probes[d] : share >= 0.99;
    detail += " | d=" + std::to_string(d) + " rejected " + ratio(rejected[d], probes[d]) + " (" + fixed(share) +
              "), accepted that are exact cone members " + ratio(accepted_members[d], probes[d] - rejected[d]);
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

class BoundObserver : public rwdir::WalkObserver {
 public:
  std::string_view name() const override { return "bound_check"; }
  void observe(const rwdir::StepView& view) override {
    const rwdir::BoundCheck check = rwdir::biggest_jump_bound_check(*view.state);
    if (!check.applicable) return;
    ++applicable;
    violations += !check.ok;
  }
  std::uint64_t applicable = 0;
  std::uint64_t violations = 0;
};

CriterionResult criterion_3() {
  CriterionResult r{"C3", "biggest-jump bound at every step with B_n < M_n (50 LOG_TAIL radial runs, n = 1e4)", true, ""};
  const rwdir::IncrementSpec spec = rwdir::heavytails_spec();
  std::uint64_t applicable = 0;
  std::uint64_t violations = 0;
  std::uint64_t steps = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    BoundObserver obs;
    std::vector<rwdir::WalkObserver*> observers{&obs};
    const rwdir::TrajectoryRecord rec = rwdir::run_walk(spec, 10000, rwdir::run_stream(rwdir::kAcceptanceSeed, i), observers);
    applicable += obs.applicable;
    violations += obs.violations;
    steps += rec.completed_steps;
  }
  r.pass = violations == 0 && steps == 50u * 10000u;
  r.detail = "steps=" + std::to_string(steps) + " checked (B_n < M_n)=" + std::to_string(applicable) +
             " violations=" + std::to_string(violations);
  return r;
}

CriterionResult relabel(CriterionResult c, const std::string& id, const std::string& title) {
  c.detail = c.id + ": " + c.detail;
  c.id = id;
  c.title = title;
  return c;
}

CriterionResult criterion_4() {
  const rwdir::ExampleParams p = rwdir::example_params("ex-10.1", {.alpha = 0.5});
  return relabel(rwdir::check_two_point(p), "C4", "two-point direction set, alpha = 0.5 (20 runs, n = 1e6)");
}

CriterionResult criterion_5() {
  const rwdir::ExampleParams p = rwdir::example_params("ex-10.1", {.alpha = 2.0, .steps = 100000, .runs = 20});
  return relabel(rwdir::check_drift(p), "C5", "drift regime, alpha = 2 (20 runs, n = 1e5)");
}

CriterionResult criterion_6() {
  const rwdir::ExampleParams p = rwdir::example_params("ex-10.2", {.alpha = 1.5, .steps = 1000000, .runs = 10});
  return relabel(rwdir::check_full_circle(p), "C6", "full circle, alpha = 1.5 (10 runs, n = 1e6, M = 64, r = 0.35, R = 30)");
}

CriterionResult criterion_7() {
  const rwdir::ExampleParams p = rwdir::example_params("heavytails-demo", {.steps = 100000, .runs = 10});
  return relabel(rwdir::check_heavytails(p), "C7", "LOG_TAIL radial walk concentrates on its atoms (10 runs, n = 1e5)");
}

CriterionResult criterion_8() {
  const rwdir::ExampleParams p =
      rwdir::example_params("ex-10.3", {.alpha = 1.1, .dimension = 4, .steps = 1000000, .runs = 5});
  return relabel(rwdir::check_band(p), "C8", "band concentration, d = 4, alpha = 1.1 (5 runs, n = 1e6)");
}

struct ProjectionRun {
  std::vector<rwdir::ProjectionVerdict> verdicts;
  std::size_t exceptional = 0;
};

std::vector<ProjectionRun> projection_runs(const rwdir::IncrementSpec& spec, const std::vector<Vec>& grid,
                                           std::size_t runs, std::uint64_t steps, std::uint64_t seed) {
  return rwdir::run_indexed<ProjectionRun>(runs, 1, [&](std::size_t i) {
    rwdir::ProjectionObserver obs(grid);
    std::vector<rwdir::WalkObserver*> observers{&obs};
    rwdir::run_walk(spec, steps, rwdir::run_stream(seed, i), observers);
    ProjectionRun out;
    for (const rwdir::ProjectionStats& s : obs.stats()) out.verdicts.push_back(rwdir::classify(s));
    out.exceptional = rwdir::scan_exceptional(obs.stats()).size();
    return out;
  });
}

rwdir::IncrementSpec rad_rad() {
  return {2, rwdir::SpecForm::kCoordinateProduct, {rwdir::ScalarLaw::rademacher(), rwdir::ScalarLaw::rademacher()}, {}, {0.0, 0.0}};
}

rwdir::IncrementSpec drift_rad() {
  return {2, rwdir::SpecForm::kCoordinateProduct, {rwdir::ScalarLaw::constant(1.0), rwdir::ScalarLaw::rademacher()}, {}, {0.0, 0.0}};
}

CriterionResult criterion_9() {
  CriterionResult r{"C9", "projection trichotomy: OSC for (Rad,Rad), PLUS/MINUS for e1 + e2 Rad, no exceptional directions", true, ""};
  // The 64-point grid is every fourth point of the 256-point grid.
  const std::vector<Vec> grid = rwdir::direction_grid(2, 256, 0);
  const auto sym = projection_runs(rad_rad(), grid, 20, 1000000, rwdir::kAcceptanceSeed);
  std::size_t all_osc = 0;
  std::size_t no_exceptional = 0;
  for (const ProjectionRun& run : sym) {
    bool every = true;
    for (std::size_t k = 0; k < grid.size(); k += 4) every &= run.verdicts[k] == rwdir::ProjectionVerdict::kOsc;
    all_osc += every;
    no_exceptional += run.exceptional == 0;
  }
  const auto drift = projection_runs(drift_rad(), grid, 20, 1000000, rwdir::kAcceptanceSeed + 1);
  std::size_t signed_ok = 0;
  for (const ProjectionRun& run : drift) {
    bool ok = true;
    for (std::size_t k = 0; k < grid.size(); k += 4) {
      if (grid[k][0] > 0.1) ok &= run.verdicts[k] == rwdir::ProjectionVerdict::kPlus;
      if (grid[k][0] < -0.1) ok &= run.verdicts[k] == rwdir::ProjectionVerdict::kMinus;
    }
    signed_ok += ok;
  }
  r.pass = all_osc >= 18 && signed_ok >= 19 && no_exceptional >= 18;
  r.detail = "all-OSC runs=" + ratio(all_osc, sym.size()) + " PLUS/MINUS runs=" + ratio(signed_ok, drift.size()) +
             " empty exceptional scans=" + ratio(no_exceptional, sym.size());
  return r;
}

std::vector<rwdir::HullGrowthReport> hull_runs(const rwdir::IncrementSpec& spec, std::size_t runs, std::uint64_t steps,
                                               std::uint64_t seed) {
  const std::vector<Vec> tracked = rwdir::direction_grid(2, 16, 0);
  return rwdir::run_indexed<rwdir::HullGrowthReport>(runs, 1, [&](std::size_t i) {
    rwdir::HullTracker tracker(2, tracked, rwdir::is_lattice(spec));
    std::vector<rwdir::WalkObserver*> observers{&tracker};
    rwdir::run_walk(spec, steps, rwdir::run_stream(seed, i), observers);
    return rwdir::hull_growth_report(tracker);
  });
}

CriterionResult criterion_10() {
  CriterionResult r{"C10", "hull growth: FULL_SPACE_TREND for symmetric walks, CONFINED at the drift direction", true, ""};
  auto count_full = [](const std::vector<rwdir::HullGrowthReport>& reports) {
    return static_cast<std::size_t>(std::count_if(reports.begin(), reports.end(),
                                                  [](const rwdir::HullGrowthReport& h) { return h.full_space_trend; }));
  };
  const auto sym = hull_runs(rad_rad(), 20, 1000000, rwdir::kAcceptanceSeed + 2);
  const std::size_t sym_full = count_full(sym);

  // Tracked index 0 is e1, the drift direction.
  const auto drift = hull_runs(drift_rad(), 20, 1000000, rwdir::kAcceptanceSeed + 3);
  std::size_t confined = 0;
  for (const rwdir::HullGrowthReport& h : drift) {
    const bool at_drift = std::find(h.confined_directions.begin(), h.confined_directions.end(), 0u) != h.confined_directions.end();
    confined += h.confined && at_drift;
  }

  const rwdir::ExampleParams two_point = rwdir::example_params("ex-10.2", {.alpha = 0.5});
  const auto ex = hull_runs(rwdir::example_spec(two_point), two_point.runs, two_point.steps, rwdir::kAcceptanceSeed + 4);
  const std::size_t ex_full = count_full(ex);
  const CriterionResult d = rwdir::check_two_point(two_point);

  r.pass = sym_full * 10 >= sym.size() * 9 && confined == drift.size() && ex_full * 10 >= ex.size() * 9 && d.pass;
  r.detail = "symmetric FULL_SPACE_TREND=" + ratio(sym_full, sym.size()) + " drift CONFINED at e1=" +
             ratio(confined, drift.size()) + " ex-10.2 alpha=0.5 FULL_SPACE_TREND=" + ratio(ex_full, ex.size()) +
             " with two-point D-estimate " + (d.pass ? "PASS" : "FAIL") + " (" + d.detail + ")";
  return r;
}

CriterionResult criterion_11() {
  CriterionResult r{"C11", "dyadic tail ratios: LOG_TAIL u_k = 1/(k+1), POLY u_k = 1 - 2^-alpha, with trend verdicts", true, ""};
  const std::vector<double> log_u = rwdir::u_sequence(rwdir::TailFunction::log_tail(), 64);
  double worst = 0.0;
  for (std::size_t k = 2; k <= 64; ++k) worst = std::max(worst, std::fabs(log_u[k] - 1.0 / static_cast<double>(k + 1)));
  const rwdir::PruittVerdict log_verdict = rwdir::pruitt_diagnostic(log_u).verdict;
  bool poly_ok = true;
  for (double alpha : {0.5, 1.5}) {
    const std::vector<double> u = rwdir::u_sequence(rwdir::TailFunction::poly(alpha), 64);
    for (std::size_t k = 0; k <= 64; ++k) worst = std::max(worst, std::fabs(u[k] - (1.0 - std::pow(2.0, -alpha))));
    poly_ok &= rwdir::pruitt_diagnostic(u).verdict == rwdir::PruittVerdict::kDivergentTrend;
  }
  r.pass = worst <= 1e-12 && log_verdict == rwdir::PruittVerdict::kConvergentTrend && poly_ok;
  r.detail = "worst error=" + sci(worst) + " LOG_TAIL verdict=" + std::string(rwdir::to_string(log_verdict)) +
             " POLY verdicts " + (poly_ok ? "DIVERGENT_TREND" : "not DIVERGENT_TREND");
  return r;
}

CriterionResult criterion_12() {
  CriterionResult r{"C12", "sampler tails P(|zeta| >= r) = r^-alpha within 6 sigma (1e6 draws, alpha in {0.5, 1.5})", true, ""};
  constexpr std::uint64_t kDraws = 1000000;
  bool ok = true;
  std::string detail;
  for (double alpha : {0.5, 1.5}) {
    rwdir::RandomStream rng(rwdir::kAcceptanceSeed, static_cast<std::uint64_t>(alpha * 10));
    std::uint64_t hits[3] = {0, 0, 0};
    for (std::uint64_t i = 0; i < kDraws; ++i) {
      const std::int64_t z = rwdir::sample_s_two_sided(rng, alpha);
      const std::int64_t m = z < 0 ? -z : z;
      hits[0] += m >= 2;
      hits[1] += m >= 4;
      hits[2] += m >= 8;
    }
    for (int j = 0; j < 3; ++j) {
      const double level = std::pow(2.0, j + 1);
      const double p = std::pow(level, -alpha);
      const double bound = 6.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(kDraws));
      const double phat = static_cast<double>(hits[j]) / static_cast<double>(kDraws);
      const double z = std::fabs(phat - p) / (bound / 6.0);
      ok &= std::fabs(phat - p) <= bound;
      detail += " a=" + fixed(alpha, 1) + ",r=" + std::to_string(1 << (j + 1)) + ":" + fixed(z, 2) + "sd";
    }
  }
  r.pass = ok;
  r.detail = "deviation" + detail;
  return r;
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    out[std::filesystem::relative(entry.path(), dir).string()] = bytes.str();
  }
  return out;
}

CriterionResult criterion_13() {
  CriterionResult r{"C13", "determinism: committed configs rerun to byte-identical artifacts", true, ""};
  const std::filesystem::path config_dir = RWDIR_CONFIG_DIR;
  std::vector<std::filesystem::path> configs;
  for (const auto& entry : std::filesystem::directory_iterator(config_dir)) {
    if (entry.path().extension() == ".json") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());
  const std::filesystem::path scratch = std::filesystem::temp_directory_path() / "rwdir_acceptance_c13";
  std::size_t identical = 0;
  std::size_t files = 0;
  std::string mismatches;
  for (const auto& path : configs) {
    rwdir::ExperimentConfig config = rwdir::ExperimentConfig::load(path);
    std::map<std::string, std::string> trees[2];
    for (int pass = 0; pass < 2; ++pass) {
      const std::filesystem::path dir = scratch / (path.stem().string() + "_" + std::to_string(pass));
      std::filesystem::remove_all(dir);
      // The second pass changes the worker count; output bytes must not depend on it.
      config.workers = pass == 0 ? 1 : 3;
      rwdir::write_artifacts(rwdir::execute_experiment(config), dir);
      trees[pass] = read_tree(dir);
    }
    files += trees[0].size();
    if (trees[0] == trees[1] && !trees[0].empty()) {
      ++identical;
    } else {
      mismatches += " " + path.filename().string();
    }
  }
  std::filesystem::remove_all(scratch);
  r.pass = !configs.empty() && identical == configs.size();
  r.detail = "configs identical=" + ratio(identical, configs.size()) + " files compared=" + std::to_string(files) +
             (mismatches.empty() ? "" : " mismatched:" + mismatches);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<CriterionResult()>>> criteria = {
      {"C1", criterion_1},   {"C2", criterion_2},   {"C3", criterion_3},   {"C4", criterion_4},   {"C5", criterion_5},
      {"C6", criterion_6},   {"C7", criterion_7},   {"C8", criterion_8},   {"C9", criterion_9},   {"C10", criterion_10},
      {"C11", criterion_11}, {"C12", criterion_12}, {"C13", criterion_13},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  std::size_t failed = 0;
  std::size_t ran = 0;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = run();
    } catch (const std::exception& e) {
      result = {id, "threw", false, e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ++ran;
    failed += !result.pass;
    std::cout << (result.pass ? "PASS " : "FAIL ") << id << "  " << result.title << "\n     " << result.detail << "  ["
              << fixed(seconds, 1) << "s]\n"
              << std::flush;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
