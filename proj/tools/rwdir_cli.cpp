// rwdir: command-line front end for the random-walk direction toolkit.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwdir/error.hpp"
#include "rwdir/examples.hpp"
#include "rwdir/experiment.hpp"
#include "rwdir/ext_real.hpp"
#include "rwdir/pruitt.hpp"
#include "rwdir/sphere.hpp"
#include "rwdir/svg.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int exit_code_for(const rwdir::Error& e) {
  switch (e.code()) {
    case rwdir::ErrorCode::kInvalidConfig:
    case rwdir::ErrorCode::kInvalidSpec:
    case rwdir::ErrorCode::kInvalidParameter:
    case rwdir::ErrorCode::kUnknownExample:
      return kExitUsage;
    default:
      return kExitFail;
  }
}

int simulate(const std::string& config_path, const std::optional<std::string>& out_dir) {
  rwdir::ExperimentConfig config = rwdir::ExperimentConfig::load(config_path);
  if (out_dir) config.output_dir = *out_dir;
  const rwdir::ExperimentResult result = rwdir::execute_experiment(config);
  const auto paths = rwdir::write_artifacts(result, config.output_dir);
  std::cout << "config_hash " << rwdir::config_hash(config) << "\n";
  for (const rwdir::RunArtifacts& r : result.runs) {
    std::cout << "run " << r.index << " steps " << r.trajectory.completed_steps << " coverage "
              << rwdir::format_double(r.estimate.coverage()) << " trajectory " << r.trajectory.hash() << "\n";
  }
  if (result.consensus) {
    std::cout << "consensus coverage " << rwdir::format_double(result.consensus->coverage) << " agreement "
              << rwdir::format_double(result.consensus->mean_agreement) << "\n";
  }
  std::cout << "wrote " << paths.size() << " files to " << config.output_dir << "\n";
  return 0;
}

int reproduce(const std::string& name, const rwdir::ExampleOverrides& overrides, const std::optional<std::string>& json_path) {
  const rwdir::ExampleReport report = rwdir::reproduce_example(name, overrides);
  const rwdir::ExampleParams& p = report.params;
  std::cout << p.name << " alpha=" << rwdir::format_double(p.alpha) << " d=" << p.dimension << " steps=" << p.steps
            << " runs=" << p.runs << " seed=" << p.seed << "\n";
  std::cout << "expected D: " << report.expected << "\n";
  for (const rwdir::CriterionResult& c : report.criteria) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << ": " << c.title << "\n  " << c.detail << "\n";
  }
  if (json_path) {
    std::ofstream out(*json_path);
    if (!out) throw rwdir::Error(rwdir::ErrorCode::kIo, "cannot write " + *json_path);
    out << report.to_json().dump(2) << "\n";
  }
  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? 0 : kExitFail;
}

int pruitt(const std::string& tail_text, std::size_t k, const std::optional<std::string>& csv_path) {
  const rwdir::TailFunction tail = rwdir::parse_tail(tail_text);
  const std::vector<double> u = rwdir::u_sequence(tail, k);
  const rwdir::PruittDiagnostic diag = rwdir::pruitt_diagnostic(u);
  const std::string csv = rwdir::pruitt_csv(tail, u, diag);
  if (csv_path) {
    std::ofstream out(*csv_path);
    if (!out) throw rwdir::Error(rwdir::ErrorCode::kIo, "cannot write " + *csv_path);
    out << csv;
  } else {
    std::cout << csv;
  }
  std::cout << "verdict " << rwdir::to_string(diag.verdict) << " slope " << rwdir::format_double(diag.slope)
            << " r_squared " << rwdir::format_double(diag.r_squared) << "\n";
  return 0;
}

// Accepts either a bare array of generators or {"generators": [...], "queries": [...]}.
int shull(const std::string& points_path) {
  std::ifstream in(points_path);
  if (!in) throw rwdir::Error(rwdir::ErrorCode::kIo, "cannot read " + points_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw rwdir::Error(rwdir::ErrorCode::kInvalidParameter, points_path + ": " + e.what());
  }
  const nlohmann::json generators = j.is_array() ? j : j.value("generators", nlohmann::json::array());
  const nlohmann::json queries = j.is_object() ? j.value("queries", nlohmann::json::array()) : nlohmann::json::array();
  auto read_points = [&](const nlohmann::json& list, const char* field) {
    std::vector<rwdir::Vec> out;
    if (!list.is_array()) throw rwdir::Error(rwdir::ErrorCode::kInvalidParameter, std::string(field) + ": expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const nlohmann::json& p = list[i];
      const std::string where = std::string(field) + "[" + std::to_string(i) + "]";
      if (!p.is_array() || p.empty()) throw rwdir::Error(rwdir::ErrorCode::kInvalidParameter, where + ": expected a vector");
      rwdir::Vec v;
      for (const auto& x : p) {
        if (!x.is_number()) throw rwdir::Error(rwdir::ErrorCode::kInvalidParameter, where + ": non-numeric entry");
        v.push_back(x.get<double>());
      }
      out.push_back(rwdir::hat(v));
    }
    return out;
  };
  const rwdir::SHull hull = rwdir::s_hull(read_points(generators, "generators"));
  nlohmann::json out = {
      {"dimension", hull.dimension()},
      {"rank", hull.rank()},
      {"origin_in_hull", hull.origin_in_hull()},
      {"full_sphere", hull.full_sphere()},
  };
  if (hull.dimension() == 2) out["arcs"] = hull.arcs_json();
  if (hull.dimension() <= 3) {
    nlohmann::json boundary = nlohmann::json::array();
    for (const rwdir::Vec& b : rwdir::s_boundary(hull).points) boundary.push_back(b);
    out["boundary_points"] = std::move(boundary);
  }
  nlohmann::json membership = nlohmann::json::array();
  for (const rwdir::Vec& q : read_points(queries, "queries")) {
    membership.push_back({{"point", q}, {"contains", hull.contains(q)}});
  }
  if (!membership.empty()) out["queries"] = std::move(membership);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int plot(const std::string& csv, const std::string& out_path) {
  const rwdir::PlotKind kind = rwdir::emit_plot_from_csv(csv, out_path);
  std::cout << "wrote " << rwdir::to_string(kind) << " plot to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed random walks: asymptotic directions, projections and hull growth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rwdir::kVersion));

  std::string config_path;
  std::optional<std::string> out_dir;
  auto* sim = app.add_subcommand("simulate", "Run a seeded experiment from a JSON config and write its artifacts");
  sim->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sim->add_option("-o,--output", out_dir, "Override the config's output directory");

  std::string example;
  rwdir::ExampleOverrides overrides;
  std::optional<std::string> report_path;
  auto* rep = app.add_subcommand("reproduce", "Reproduce a worked example and report PASS/FAIL");
  rep->add_option("example", example, "ex-10.1, ex-10.2, ex-10.3, ex-10.4 or heavytails-demo")->required();
  rep->add_option("--steps", overrides.steps, "Steps per run");
  rep->add_option("--runs", overrides.runs, "Number of runs");
  rep->add_option("--seed", overrides.seed, "Base seed");
  rep->add_option("--alpha", overrides.alpha, "Tail exponent");
  rep->add_option("--dimension", overrides.dimension, "Dimension (ex-10.3)");
  rep->add_option("--workers", overrides.workers, "Concurrent runs");
  rep->add_option("--json", report_path, "Also write the report as JSON");

  std::string tail;
  std::size_t k = 64;
  std::optional<std::string> pruitt_csv_path;
  auto* pru = app.add_subcommand("pruitt", "Dyadic ratios u_k of a tail and the Pruitt-series trend");
  pru->add_option("tail", tail, "log, poly:<alpha> or stretched:<beta>")->required();
  pru->add_option("--K", k, "Largest dyadic index")->check(CLI::Range(16, 1024));
  pru->add_option("--csv", pruitt_csv_path, "Write the table here instead of stdout");

  std::string points_path;
  auto* sh = app.add_subcommand("shull", "s-convex hull of unit vectors read from JSON");
  sh->add_option("points", points_path, "Generators, optionally with queries")->required()->check(CLI::ExistingFile);

  std::string csv_path;
  std::string svg_path;
  auto* pl = app.add_subcommand("plot", "Render a trajectory, direction or hull CSV as SVG");
  pl->add_option("csv", csv_path, "Input CSV")->required()->check(CLI::ExistingFile);
  pl->add_option("-o,--output", svg_path, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) return simulate(config_path, out_dir);
    if (*rep) return reproduce(example, overrides, report_path);
    if (*pru) return pruitt(tail, k, pruitt_csv_path);
    if (*sh) return shull(points_path);
    if (*pl) return plot(csv_path, svg_path);
  } catch (const rwdir::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
