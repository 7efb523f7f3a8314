#include "rwdir/examples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rwdir/batch.hpp"
#include "rwdir/direction_estimator.hpp"
#include "rwdir/error.hpp"
#include "rwdir/sphere.hpp"
#include "rwdir/walk.hpp"

namespace rwdir {

namespace {

struct RunEstimates {
  DirectionSetEstimate estimate;
  std::optional<DirectionSetEstimate> probe;
  std::vector<double> final_direction;
};

std::vector<RunEstimates> run_estimates(const IncrementSpec& spec, const ExampleParams& params,
                                        const std::vector<Vec>& grid, const EstimatorConfig& config,
                                        const std::vector<Vec>& probe_grid = {},
                                        const EstimatorConfig& probe_config = {}) {
  return run_indexed<RunEstimates>(params.runs, params.workers, [&](std::size_t i) {
    const RandomStream stream = run_stream(params.seed, i);
    CapVisitAccumulator estimator(grid, config);
    estimator.set_metadata(stream.seed(), stream.stream());
    std::optional<CapVisitAccumulator> probe;
    std::vector<WalkObserver*> observers{&estimator};
    if (!probe_grid.empty()) {
      probe.emplace(probe_grid, probe_config);
      observers.push_back(&*probe);
    }
    const TrajectoryRecord record = run_walk(spec, params.steps, stream, observers);
    RunEstimates out;
    out.estimate = estimator.finalize();
    if (probe) out.probe = probe->finalize();
    out.final_direction = record.checkpoints.back().direction;
    return out;
  });
}

Consensus consensus_of(const std::vector<RunEstimates>& runs) {
  std::vector<DirectionSetEstimate> estimates;
  for (const RunEstimates& r : runs) estimates.push_back(r.estimate);
  return combine_runs(estimates);
}

// Single-level ladder used to ask "was this cap ever visited beyond R".
EstimatorConfig probe_config(double radius, double r0) {
  EstimatorConfig c;
  c.cap_radius = radius;
  c.r0 = r0;
  c.levels = 0;
  c.min_top_level = 0;
  c.v_min = 1;
  c.l_out = 0;
  return c;
}

EstimatorConfig ladder_config(double radius, double r0, std::uint64_t steps) {
  EstimatorConfig c;
  c.cap_radius = radius;
  c.r0 = r0;
  c.levels = 8;
  c.burn_in = steps / 100;
  return c;
}

std::string fraction(std::size_t k, std::size_t n) {
  std::ostringstream out;
  out << k << "/" << n;
  return out.str();
}

std::string fixed(double x, int digits = 3) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

void require_alpha_range(const ExampleParams& p, bool ok, const std::string& range) {
  if (!ok) {
    throw Error(ErrorCode::kInvalidParameter,
                p.name + ": alpha = " + format_double(p.alpha) + " is outside the example's range " + range);
  }
}

}  // namespace

std::vector<std::string> example_names() { return {"ex-10.1", "ex-10.2", "ex-10.3", "ex-10.4", "heavytails-demo"}; }

ExampleParams example_params(std::string_view name, const ExampleOverrides& o) {
  ExampleParams p;
  p.name = std::string(name);
  if (name == "ex-10.1") {
    p.alpha = o.alpha.value_or(0.5);
    p.runs = 20;
    p.steps = p.alpha > 1.0 ? 100000 : 1000000;
  } else if (name == "ex-10.2") {
    p.alpha = o.alpha.value_or(1.5);
    p.runs = p.alpha > 1.0 ? 10 : 20;
    p.steps = 1000000;
  } else if (name == "ex-10.3") {
    p.alpha = o.alpha.value_or(1.1);
    p.dimension = 4;
    p.runs = 5;
    p.steps = 1000000;
  } else if (name == "ex-10.4") {
    p.alpha = o.alpha.value_or(0.5);
    p.runs = 10;
    p.steps = 100000;
  } else if (name == "heavytails-demo") {
    p.alpha = 0.0;
    p.runs = 10;
    p.steps = 100000;
  } else {
    std::string known;
    for (const std::string& n : example_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::kUnknownExample, "unknown example '" + std::string(name) + "' (known: " + known + ")");
  }
  if (o.dimension) p.dimension = *o.dimension;
  if (o.steps) p.steps = *o.steps;
  if (o.runs) p.runs = *o.runs;
  if (o.seed) p.seed = *o.seed;
  if (o.workers) p.workers = *o.workers;
  if (p.steps < 16) throw Error(ErrorCode::kInvalidParameter, "steps must be >= 16");
  if (p.runs < 1) throw Error(ErrorCode::kInvalidParameter, "runs must be >= 1");
  return p;
}

IncrementSpec drift_alpha_spec(double alpha) {
  return {2, SpecForm::kCoordinateProduct, {ScalarLaw::constant(1.0), ScalarLaw::s_two_sided(alpha)}, {}, {0.0, 0.0}};
}

IncrementSpec rademacher_alpha_spec(double alpha) {
  return {2, SpecForm::kCoordinateProduct, {ScalarLaw::rademacher(), ScalarLaw::s_two_sided(alpha)}, {}, {0.0, 0.0}};
}

IncrementSpec band_spec(std::size_t d, double alpha) {
  IncrementSpec spec{d, SpecForm::kCoordinateProduct, {}, {}, std::vector<double>(d, 0.0)};
  for (std::size_t k = 0; k + 1 < d; ++k) spec.laws.push_back(ScalarLaw::s_two_sided(alpha));
  spec.laws.push_back(ScalarLaw::rademacher());
  return spec;
}

IncrementSpec positive_cone_spec(const std::vector<std::vector<double>>& u, double alpha) {
  IncrementSpec spec{u.front().size(), SpecForm::kLinearCombination, {}, {}, std::vector<double>(u.front().size(), 0.0)};
  for (const auto& v : u) {
    spec.laws.push_back(ScalarLaw::s_one_sided(alpha));
    spec.atoms.push_back({v, 0.0});
  }
  return spec;
}

std::vector<std::vector<double>> heavytails_atoms() {
  const double s = std::sqrt(3.0) / 2.0;
  return {{1.0, 0.0}, {-0.5, s}, {-0.5, -s}};
}

IncrementSpec heavytails_spec() {
  IncrementSpec spec{2, SpecForm::kRadialProduct, {ScalarLaw::log_tail()}, {}, {0.0, 0.0}};
  for (const auto& v : heavytails_atoms()) spec.atoms.push_back({v, 1.0 / 3.0});
  return spec;
}

IncrementSpec example_spec(const ExampleParams& p) {
  if (p.name == "ex-10.1" || p.name == "ex-10.2") {
    require_alpha_range(p, p.alpha > 0.0 && p.alpha != 1.0, "(0, 1) or (1, inf)");
    if (p.dimension != 2) throw Error(ErrorCode::kInvalidParameter, p.name + " is planar: d must be 2");
    return p.name == "ex-10.1" ? drift_alpha_spec(p.alpha) : rademacher_alpha_spec(p.alpha);
  }
  if (p.name == "ex-10.3") {
    if (p.dimension < 4) throw Error(ErrorCode::kInvalidParameter, "ex-10.3 needs d >= 4");
    const double d = static_cast<double>(p.dimension);
    require_alpha_range(p, p.alpha > 1.0 && p.alpha < 2.0 * (d - 1.0) / (1.0 + d),
                        "(1, " + format_double(2.0 * (d - 1.0) / (1.0 + d)) + ")");
    return band_spec(p.dimension, p.alpha);
  }
  if (p.name == "ex-10.4") {
    require_alpha_range(p, p.alpha > 0.0 && p.alpha < 1.0, "(0, 1)");
    if (p.dimension != 2) throw Error(ErrorCode::kInvalidParameter, "ex-10.4 is reproduced with u1 = e1, u2 = e2 in d = 2");
    return positive_cone_spec({{1.0, 0.0}, {0.0, 1.0}}, p.alpha);
  }
  if (p.name == "heavytails-demo") return heavytails_spec();
  throw Error(ErrorCode::kUnknownExample, "unknown example '" + p.name + "'");
}

CriterionResult check_two_point(const ExampleParams& params) {
  const IncrementSpec spec = example_spec(params);
  const std::vector<Vec> grid = direction_grid(2, 64, 0);
  const std::vector<Vec> poles{{0.0, 1.0}, {0.0, -1.0}};
  const auto runs = run_estimates(spec, params, grid, ladder_config(0.15, 10.0, params.steps), poles,
                                  probe_config(0.3, 1000.0));
  const Consensus consensus = consensus_of(runs);
  std::size_t in = 0;
  std::size_t stray = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (consensus.verdicts[p] != Verdict::kIn) continue;
    ++in;
    if (std::min(chord(grid[p], poles[0]), chord(grid[p], poles[1])) > 0.15) ++stray;
  }
  std::size_t both = 0;
  for (const RunEstimates& r : runs) both += r.probe->points[0].visits[0] > 0 && r.probe->points[1].visits[0] > 0;
  const double share = static_cast<double>(both) / static_cast<double>(runs.size());
  CriterionResult out;
  out.id = params.name + "/two-point";
  out.title = "D = {+-e2}: consensus IN within 0.15 of +-e2; both caps beyond R=1e3 in >= 90% of runs";
  out.pass = stray == 0 && share >= 0.9;
  out.detail = "consensus IN=" + std::to_string(in) + " stray=" + std::to_string(stray) + " both-caps runs=" +
               fraction(both, runs.size()) + " agreement=" + fixed(consensus.mean_agreement);
  return out;
}

CriterionResult check_drift(const ExampleParams& params) {
  const IncrementSpec spec = example_spec(params);
  const std::vector<Vec> grid = direction_grid(2, 64, 0);
  const Vec e1{1.0, 0.0};
  const auto runs = run_estimates(spec, params, grid, ladder_config(0.3, 10.0, params.steps));
  const Consensus consensus = consensus_of(runs);
  std::size_t close = 0;
  for (const RunEstimates& r : runs) close += chord(r.final_direction, e1) < 0.05;
  bool inside = true;
  bool has_e1 = false;
  std::size_t in = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (consensus.verdicts[p] != Verdict::kIn) continue;
    ++in;
    inside &= chord(grid[p], e1) < 0.3;
    has_e1 |= chord(grid[p], e1) < 1e-12;
  }
  const double share = static_cast<double>(close) / static_cast<double>(runs.size());
  CriterionResult out;
  out.id = params.name + "/drift";
  out.title = "D = {e1}: |S^_N - e1| < 0.05 in >= 95% of runs; consensus IN = e1-cap only";
  out.pass = share >= 0.95 && inside && has_e1;
  out.detail = "close runs=" + fraction(close, runs.size()) + " consensus IN=" + std::to_string(in) +
               (inside ? " inside e1-cap" : " outside e1-cap") + (has_e1 ? ", contains e1" : ", missing e1");
  return out;
}

CriterionResult check_full_circle(const ExampleParams& params) {
  const IncrementSpec spec = example_spec(params);
  const std::vector<Vec> grid = direction_grid(2, 64, 0);
  EstimatorConfig config = probe_config(0.35, 30.0);
  config.v_min = 3;
  const auto runs = run_estimates(spec, params, grid, config);
  const Consensus consensus = consensus_of(runs);
  const double worst = *std::min_element(consensus.run_coverage.begin(), consensus.run_coverage.end());
  CriterionResult out;
  out.id = params.name + "/full-circle";
  out.title = "D = S^1: coverage >= 0.8 in every run, union coverage >= 0.95";
  out.pass = worst >= 0.8 && consensus.union_coverage >= 0.95;
  out.detail = "min run coverage=" + fixed(worst) + " union coverage=" + fixed(consensus.union_coverage) +
               " consensus coverage=" + fixed(consensus.coverage);
  return out;
}

CriterionResult check_heavytails(const ExampleParams& params) {
  const IncrementSpec spec = example_spec(params);
  const std::vector<Vec> grid = direction_grid(2, 64, 0);
  const std::vector<Vec> atoms = heavytails_atoms();
  const auto runs = run_estimates(spec, params, grid, ladder_config(0.2, 1000.0, params.steps), atoms,
                                  probe_config(0.2, 1e6));
  std::size_t all_atoms = 0;
  std::size_t clean = 0;
  std::size_t stray_total = 0;
  for (const RunEstimates& r : runs) {
    bool every = true;
    for (const PointEstimate& pe : r.probe->points) every &= pe.visits[0] > 0;
    all_atoms += every;
    std::size_t stray = 0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      if (r.estimate.points[p].verdict != Verdict::kIn) continue;
      double nearest = 2.0;
      for (const Vec& a : atoms) nearest = std::min(nearest, chord(grid[p], a));
      stray += nearest > 0.5;
    }
    clean += stray == 0;
    stray_total += stray;
  }
  CriterionResult out;
  out.id = params.name + "/atoms";
  out.title = "D = atoms: each atom cap visited beyond R=1e6 in every run; no IN point > 0.5 from all atoms";
  out.pass = all_atoms == runs.size() && clean == runs.size();
  out.detail = "runs with all atoms=" + fraction(all_atoms, runs.size()) + " runs without stray IN=" +
               fraction(clean, runs.size()) + " stray IN points=" + std::to_string(stray_total);
  return out;
}

CriterionResult check_band(const ExampleParams& params) {
  const IncrementSpec spec = example_spec(params);
  const std::size_t d = params.dimension;
  const std::vector<Vec> grid = direction_grid(d, 256, 0);
  const auto runs = run_estimates(spec, params, grid, ladder_config(0.2, 10.0, params.steps));
  double worst = 0.0;
  std::size_t good = 0;
  for (const RunEstimates& r : runs) {
    const int top = r.estimate.top_level;
    double total = 0.0;
    double off = 0.0;
    if (top >= 0) {
      for (std::size_t p = 0; p < grid.size(); ++p) {
        const double v = static_cast<double>(r.estimate.points[p].visits[static_cast<std::size_t>(top)]);
        total += v;
        if (std::fabs(grid[p][d - 1]) > 0.3) off += v;
      }
    }
    const double share = total > 0.0 ? off / total : 1.0;
    worst = std::max(worst, share);
    good += share <= 0.05;
  }
  CriterionResult out;
  out.id = params.name + "/band";
  out.title = "D = E_d: share of top-level visits with |u.e_d| > 0.3 <= 5% in every run";
  out.pass = good == runs.size();
  out.detail = "runs within bound=" + fraction(good, runs.size()) + " worst share=" + fixed(worst, 4);
  return out;
}

CriterionResult check_cone(const ExampleParams& params) {
  const IncrementSpec spec = example_spec(params);
  std::vector<Vec> generators;
  for (const Atom& a : spec.atoms) generators.push_back(hat(a.vector));
  const SHull cone = s_hull(generators);
  const SBoundary boundary = s_boundary(cone);
  const std::vector<Vec> grid = direction_grid(2, 64, 0);
  const auto runs = run_estimates(spec, params, grid, ladder_config(0.15, 10.0, params.steps));
  const Consensus consensus = consensus_of(runs);
  std::size_t in = 0;
  std::size_t stray = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (consensus.verdicts[p] != Verdict::kIn) continue;
    ++in;
    double distance = 0.0;
    if (!cone.contains(grid[p])) {
      distance = 2.0;
      for (const Vec& b : boundary.points) distance = std::min(distance, chord(grid[p], b));
    }
    stray += distance > 0.15;
  }
  CriterionResult out;
  out.id = params.name + "/cone";
  out.title = "D = s_hull{u_j}: consensus IN nonempty and within 0.15 of the cone";
  out.pass = in > 0 && stray == 0;
  out.detail = "consensus IN=" + std::to_string(in) + " stray=" + std::to_string(stray) +
               " agreement=" + fixed(consensus.mean_agreement);
  return out;
}

nlohmann::json ExampleReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const CriterionResult& c : criteria) {
    list.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return {
      {"example", params.name},
      {"alpha", params.alpha},
      {"dimension", params.dimension},
      {"steps", params.steps},
      {"runs", params.runs},
      {"seed", params.seed},
      {"spec", rwdir::to_json(spec)},
      {"expected", expected},
      {"criteria", std::move(list)},
      {"pass", pass},
  };
}

ExampleReport reproduce_example(std::string_view name, const ExampleOverrides& overrides) {
  ExampleReport report;
  report.params = example_params(name, overrides);
  report.spec = example_spec(report.params);
  const ExampleParams& p = report.params;
  if (p.name == "ex-10.1") {
    if (p.alpha < 1.0) {
      report.expected = "{+e2, -e2}";
      report.criteria.push_back(check_two_point(p));
    } else {
      report.expected = "{e1}";
      report.criteria.push_back(check_drift(p));
    }
  } else if (p.name == "ex-10.2") {
    if (p.alpha < 1.0) {
      report.expected = "{+e2, -e2}";
      report.criteria.push_back(check_two_point(p));
    } else {
      report.expected = "S^1";
      report.criteria.push_back(check_full_circle(p));
    }
  } else if (p.name == "ex-10.3") {
    report.expected = "E_d = {u : u.e_d = 0}";
    report.criteria.push_back(check_band(p));
  } else if (p.name == "ex-10.4") {
    report.expected = "s_hull{e1, e2} (closed first-quadrant arc)";
    report.criteria.push_back(check_cone(p));
  } else {
    report.expected = "the three direction atoms";
    report.criteria.push_back(check_heavytails(p));
  }
  report.pass = std::all_of(report.criteria.begin(), report.criteria.end(), [](const CriterionResult& c) { return c.pass; });
  return report;
}

}  // namespace rwdir
