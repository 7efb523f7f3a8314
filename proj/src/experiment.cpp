#include "rwdir/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rwdir/batch.hpp"
#include "rwdir/error.hpp"

namespace rwdir {

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown fields.
class FieldReader {
 public:
  FieldReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const nlohmann::json* raw(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::uint64_t count(const char* key, std::uint64_t fallback, std::uint64_t minimum = 0) {
    const nlohmann::json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) fail(key, "expected a non-negative integer");
    const double x = v->get<double>();
    if (!(x >= 0.0) || std::floor(x) != x || x > 9.2e18) fail(key, "expected a non-negative integer");
    const std::uint64_t out = v->is_number_unsigned() ? v->get<std::uint64_t>() : static_cast<std::uint64_t>(x);
    if (out < minimum) fail(key, "must be >= " + std::to_string(minimum));
    return out;
  }

  double real(const char* key, double fallback) {
    const nlohmann::json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) fail(key, "expected a number");
    return v->get<double>();
  }

  bool flag(const char* key, bool fallback) {
    const nlohmann::json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::string text(const char* key, const std::string& fallback) {
    const nlohmann::json* v = raw(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> reals(const char* key) {
    const nlohmann::json* v = raw(key);
    if (v == nullptr) return {};
    if (!v->is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : *v) {
      if (!x.is_number()) fail(key, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.contains(item.key())) fail(item.key(), "unknown field");
    }
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw Error(ErrorCode::kInvalidConfig, (key.empty() ? path_ : path_ + "." + key) + ": " + what);
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

bool has_log_tail(const IncrementSpec& spec) {
  for (const ScalarLaw& law : spec.laws) {
    if (law.kind == LawKind::kLogTail) return true;
  }
  return false;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

std::string run_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03zu", index);
  return buf;
}

nlohmann::json verdict_counts(const std::vector<ProjectionVerdict>& verdicts) {
  nlohmann::json counts = {{"PLUS", 0}, {"MINUS", 0}, {"OSC", 0}, {"UNDECIDED", 0}};
  for (ProjectionVerdict v : verdicts) counts[std::string(to_string(v))] = counts[std::string(to_string(v))].get<int>() + 1;
  return counts;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_steps < 1) throw Error(ErrorCode::kInvalidConfig, "config.n_steps: must be >= 1");
  if (n_runs < 1) throw Error(ErrorCode::kInvalidConfig, "config.n_runs: must be >= 1");
  if (workers < 1) throw Error(ErrorCode::kInvalidConfig, "config.workers: must be >= 1");
  if (grid_size < 1) throw Error(ErrorCode::kInvalidConfig, "config.estimator.grid_size: must be >= 1");
  if (projection_directions < 1) throw Error(ErrorCode::kInvalidConfig, "config.classifier.directions: must be >= 1");
  if (hull_tracked < 1) throw Error(ErrorCode::kInvalidConfig, "config.hull.tracked: must be >= 1");
  if (hull_batch < 1) throw Error(ErrorCode::kInvalidConfig, "config.hull.batch: must be >= 1");
  estimator.validate("config.estimator");
  classifier.validate("config.classifier");
  try {
    rwdir::validate(spec);
  } catch (const Error& e) {
    throw Error(e.code(), "config.spec." + e.message());
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json est = estimator.to_json();
  est["grid_size"] = grid_size;
  est["grid_seed"] = grid_seed;
  return {
      {"spec", rwdir::to_json(spec)},
      {"n_steps", n_steps},
      {"n_runs", n_runs},
      {"base_seed", base_seed},
      {"estimator", std::move(est)},
      {"classifier", {{"directions", projection_directions}, {"growth", classifier.growth}, {"c", classifier.c}}},
      {"hull", {{"enabled", hull}, {"tracked", hull_tracked}, {"batch", hull_batch}}},
      {"trajectory", {{"dense_cap", dense_cap}}},
  };
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  FieldReader top(j, "config");
  const nlohmann::json* spec = top.raw("spec");
  if (spec == nullptr) top.fail("spec", "missing");
  try {
    c.spec = spec_from_json(*spec, "config.spec");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidSpec || e.code() == ErrorCode::kInvalidParameter) {
      throw Error(ErrorCode::kInvalidConfig, e.message());
    }
    throw;
  }
  const std::size_t d = c.spec.dimension;
  c.n_steps = top.count("n_steps", c.n_steps, 1);
  c.n_runs = top.count("n_runs", c.n_runs, 1);
  c.base_seed = top.count("base_seed", c.base_seed);
  c.workers = top.count("workers", c.workers, 1);
  c.output_dir = top.text("output_dir", c.output_dir);

  c.grid_size = d == 2 ? 64 : 256;
  if (has_log_tail(c.spec)) c.estimator.r0 = 1000.0;
  if (const nlohmann::json* e = top.raw("estimator")) {
    FieldReader r(*e, "config.estimator");
    c.grid_size = r.count("grid_size", c.grid_size, 1);
    c.grid_seed = r.count("grid_seed", c.grid_seed);
    c.estimator.cap_radius = r.real("cap_radius", c.estimator.cap_radius);
    c.estimator.r0 = r.real("r0", c.estimator.r0);
    c.estimator.levels = r.count("levels", c.estimator.levels);
    c.estimator.burn_in = r.count("burn_in", c.estimator.burn_in);
    c.estimator.v_min = r.count("v_min", c.estimator.v_min, 1);
    c.estimator.l_out = r.count("l_out", c.estimator.l_out);
    c.estimator.min_top_level = r.count("min_top_level", c.estimator.min_top_level);
    c.estimator.alphas = r.reals("alphas");
    c.estimator.kappa = r.real("kappa", c.estimator.kappa);
    r.finish();
  }
  if (const nlohmann::json* e = top.raw("classifier")) {
    FieldReader r(*e, "config.classifier");
    c.projection_directions = r.count("directions", c.projection_directions, 1);
    c.classifier.growth = r.real("growth", c.classifier.growth);
    c.classifier.c = r.real("c", c.classifier.c);
    r.finish();
  }
  if (const nlohmann::json* e = top.raw("hull")) {
    FieldReader r(*e, "config.hull");
    c.hull = r.flag("enabled", c.hull);
    c.hull_tracked = r.count("tracked", c.hull_tracked, 1);
    c.hull_batch = r.count("batch", c.hull_batch, 1);
    r.finish();
  }
  if (const nlohmann::json* e = top.raw("trajectory")) {
    FieldReader r(*e, "config.trajectory");
    c.dense_cap = r.count("dense_cap", c.dense_cap);
    r.finish();
  }
  top.finish();
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, "config: not valid JSON: " + std::string(e.what()));
  }
  return from_json(j);
}

std::string config_hash(const ExperimentConfig& config) { return fnv1a_hex(config.to_json().dump()); }

ExperimentResult execute_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t d = config.spec.dimension;
  const std::vector<Vec> grid = direction_grid(d, config.grid_size, config.grid_seed);
  const std::vector<Vec> projection_dirs = direction_grid(d, config.projection_directions, config.grid_seed);
  const bool with_hull = config.hull && d >= 2;
  const std::vector<Vec> tracked = with_hull ? direction_grid(d, config.hull_tracked, config.grid_seed) : std::vector<Vec>{};
  const bool lattice = is_lattice(config.spec);

  ExperimentResult result;
  result.config = config;
  result.runs = run_indexed<RunArtifacts>(config.n_runs, config.workers, [&](std::size_t i) {
    const RandomStream stream = run_stream(config.base_seed, i);
    CapVisitAccumulator estimator(grid, config.estimator);
    estimator.set_metadata(stream.seed(), stream.stream());
    ProjectionObserver projections(projection_dirs);
    std::optional<HullTracker> hull;
    std::vector<WalkObserver*> observers{&estimator, &projections};
    if (with_hull) {
      hull.emplace(d, tracked, lattice, config.hull_batch);
      observers.push_back(&*hull);
    }
    RunArtifacts run;
    run.index = i;
    run.seed = stream.seed();
    run.stream = stream.stream();
    run.trajectory = run_walk(config.spec, config.n_steps, stream, observers, {config.dense_cap});
    run.estimate = estimator.finalize();
    run.projections = projections.stats();
    for (const ProjectionStats& s : run.projections) {
      run.verdicts.push_back(s.n.size() >= 4 ? classify(s, config.classifier) : ProjectionVerdict::kUndecided);
    }
    if (hull) run.hull = hull_growth_report(*hull);
    return run;
  });

  if (config.n_runs > 1) {
    std::vector<DirectionSetEstimate> estimates;
    for (const RunArtifacts& r : result.runs) estimates.push_back(r.estimate);
    result.consensus = combine_runs(estimates);
  }

  nlohmann::json seeds = nlohmann::json::array();
  nlohmann::json runs = nlohmann::json::array();
  for (const RunArtifacts& r : result.runs) {
    seeds.push_back({{"run", r.index}, {"seed", r.seed}, {"stream", r.stream}});
    nlohmann::json entry = {
        {"run", r.index},
        {"trajectory_hash", r.trajectory.hash()},
        {"completed_steps", r.trajectory.completed_steps},
        {"halted", r.trajectory.halted},
        {"saturations", r.trajectory.saturations},
        {"directions", r.estimate.to_json()},
        {"projections", verdict_counts(r.verdicts)},
    };
    if (r.hull) entry["hull"] = r.hull->to_json();
    runs.push_back(std::move(entry));
  }
  result.summary = {
      {"manifest",
       {{"version", std::string(kVersion)},
        {"config_hash", config_hash(config)},
        {"base_seed", config.base_seed},
        {"seeds", std::move(seeds)}}},
      {"config", config.to_json()},
      {"thresholds",
       {{"estimator", config.estimator.to_json()},
        {"classifier", config.classifier.to_json()},
        {"note", "verdict thresholds are statistical engineering choices, not derived from the theory"}}},
      {"runs", std::move(runs)},
  };
  if (result.consensus) result.summary["consensus"] = result.consensus->to_json();
  return result;
}

std::vector<std::filesystem::path> write_artifacts(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& path, const std::string& content) {
    write_file(path, content);
    written.push_back(path);
  };
  for (const RunArtifacts& r : result.runs) {
    const std::filesystem::path run_dir = dir / run_dir_name(r.index);
    std::filesystem::create_directories(run_dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create '" + run_dir.string() + "': " + ec.message());
    std::string trajectory = r.trajectory.to_csv();
    emit(run_dir / "trajectory.csv", trajectory);
    emit(run_dir / "directions.csv", r.estimate.to_csv());
    emit(run_dir / "projections.csv", projections_csv(r.projections, result.config.classifier));
    emit(run_dir / "hull.csv", r.hull ? r.hull->to_csv() : std::string("n,r_n,vertices\n"));
    if (!r.trajectory.dense.empty()) emit(run_dir / "dense.csv", r.trajectory.dense_to_csv());
  }
  if (result.consensus) emit(dir / "consensus.csv", result.consensus->to_csv());
  emit(dir / "summary.json", result.summary.dump(2) + "\n");
  return written;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = execute_experiment(config);
  write_artifacts(result, config.output_dir);
  return result;
}

}  // namespace rwdir
