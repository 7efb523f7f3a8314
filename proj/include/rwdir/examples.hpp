#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwdir/increment_spec.hpp"

namespace rwdir {

inline constexpr std::uint64_t kAcceptanceSeed = 2024;

// Parameters of one worked example; defaults are the acceptance scale.
struct ExampleParams {
  std::string name;
  double alpha = 0.5;
  std::size_t dimension = 2;
  std::uint64_t steps = 1000000;
  std::uint64_t runs = 20;
  std::uint64_t seed = kAcceptanceSeed;
  std::size_t workers = 1;
};

struct ExampleOverrides {
  std::optional<double> alpha;
  std::optional<std::size_t> dimension;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

std::vector<std::string> example_names();
// Error(kUnknownExample) for an unknown name.
ExampleParams example_params(std::string_view name, const ExampleOverrides& overrides = {});
// Error(kInvalidParameter) when alpha (or d) is outside the example's range.
IncrementSpec example_spec(const ExampleParams& params);

// Spec builders shared with the tests.
IncrementSpec drift_alpha_spec(double alpha);             // e1 + e2 S(alpha)
IncrementSpec rademacher_alpha_spec(double alpha);        // e1 Rad + e2 S(alpha)
IncrementSpec band_spec(std::size_t d, double alpha);     // sum e_k S(alpha) + e_d Rad
IncrementSpec positive_cone_spec(const std::vector<std::vector<double>>& u, double alpha);
IncrementSpec heavytails_spec();                          // Q xi, LOG_TAIL, three atoms
std::vector<std::vector<double>> heavytails_atoms();

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
};

// ex-10.1 / ex-10.2 with alpha < 1: consensus IN within chord 0.15 of {+-e2},
// and both +-e2 caps (r = 0.3) visited beyond R = 1000 in >= 90% of runs.
CriterionResult check_two_point(const ExampleParams& params);
// Drift regime: |S^_N - e1| < 0.05 in >= 95% of runs; consensus IN inside
// the 0.3-cap of e1 and containing e1.
CriterionResult check_drift(const ExampleParams& params);
// Full circle: coverage >= 0.8 in every run, union coverage >= 0.95.
CriterionResult check_full_circle(const ExampleParams& params);
// Q xi with LOG_TAIL: every atom cap (r = 0.2) visited beyond R = 10^6 in
// every run; no IN point farther than chord 0.5 from all atoms.
CriterionResult check_heavytails(const ExampleParams& params);
// Band: share of top-level visits with |u . e_d| > 0.3 at most 5% per run.
CriterionResult check_band(const ExampleParams& params);
// Positive cone: consensus IN nonempty and inside the 0.15-neighbourhood of
// s_hull{u_1, .., u_k}.
CriterionResult check_cone(const ExampleParams& params);

struct ExampleReport {
  ExampleParams params;
  IncrementSpec spec;
  std::string expected;
  std::vector<CriterionResult> criteria;
  bool pass = false;

  nlohmann::json to_json() const;
};

ExampleReport reproduce_example(std::string_view name, const ExampleOverrides& overrides = {});

}  // namespace rwdir
