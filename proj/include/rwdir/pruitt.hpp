#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rwdir {

// Tail T(r) = P(xi > r).
struct TailFunction {
  enum class Kind { kPoly, kLogTail, kStretchedExp, kCustom };

  Kind kind = Kind::kPoly;
  double param = 1.0;  // alpha for POLY, beta for STRETCHED_EXP
  // CUSTOM: (r, T(r)) sorted by r; T is a right-continuous step function,
  // equal to 1 below the first entry.
  std::vector<std::pair<double, double>> table;

  static TailFunction poly(double alpha);
  static TailFunction log_tail();
  static TailFunction stretched_exp(double beta);
  static TailFunction custom(std::vector<std::pair<double, double>> table);

  double operator()(double r) const;
  // log T(2^k), exact for the closed forms.
  double log_at_dyadic(std::size_t k) const;
};

// Parses "poly:<alpha>", "log", "stretched:<beta>". Error(kInvalidParameter).
TailFunction parse_tail(std::string_view text);

// u_k = (T(2^k) - T(2^{k+1})) / T(2^k), k = 0..K. Error(kTailExhausted) when
// T(2^k) = 0.
std::vector<double> u_sequence(const TailFunction& tail, std::size_t K);

enum class PruittVerdict { kConvergentTrend, kDivergentTrend, kInconclusive };
std::string_view to_string(PruittVerdict v);

struct PruittDiagnostic {
  std::vector<double> partial_sums;  // sum_{i <= k} u_i^2
  PruittVerdict verdict = PruittVerdict::kInconclusive;
  double slope = 0.0;      // log-log slope of u_k^2 on the last half
  double r_squared = 0.0;
};

// Heuristic trend on the last half of the sequence; needs K >= 16.
PruittDiagnostic pruitt_diagnostic(const std::vector<double>& u);

// k, T(2^k), u_k, partial sum of u_k^2.
std::string pruitt_csv(const TailFunction& tail, const std::vector<double>& u, const PruittDiagnostic& diagnostic);

}  // namespace rwdir
