#include "rwdir/pruitt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "rwdir/error.hpp"
#include "rwdir/ext_real.hpp"

namespace rwdir {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidParameter, std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

TailFunction TailFunction::poly(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::kInvalidParameter, "alpha must be > 0");
  return {Kind::kPoly, alpha, {}};
}

TailFunction TailFunction::log_tail() { return {Kind::kLogTail, 0.0, {}}; }

TailFunction TailFunction::stretched_exp(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::kInvalidParameter, "beta must be > 0");
  return {Kind::kStretchedExp, beta, {}};
}

TailFunction TailFunction::custom(std::vector<std::pair<double, double>> table) {
  std::sort(table.begin(), table.end());
  double previous = 1.0;
  for (const auto& [r, t] : table) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::kInvalidParameter, "tail values must lie in [0, 1]");
    if (t > previous) throw Error(ErrorCode::kInvalidParameter, "tail values must be non-increasing in r");
    previous = t;
    (void)r;
  }
  return {Kind::kCustom, 0.0, std::move(table)};
}

double TailFunction::operator()(double r) const {
  switch (kind) {
    case Kind::kPoly:
      return r <= 1.0 ? 1.0 : std::pow(r, -param);
    case Kind::kLogTail:
      return r < std::numbers::e ? 1.0 : 1.0 / std::log(r);
    case Kind::kStretchedExp:
      return r <= 1.0 ? 1.0 : std::exp(-std::pow(std::log(r), param));
    case Kind::kCustom: {
      double value = 1.0;
      for (const auto& [x, t] : table) {
        if (x <= r) value = t;
      }
      return value;
    }
  }
  return 1.0;
}

double TailFunction::log_at_dyadic(std::size_t k) const {
  const double kd = static_cast<double>(k);
  switch (kind) {
    case Kind::kPoly:
      return -param * kd * std::numbers::ln2;
    case Kind::kLogTail:
      return k < 2 ? 0.0 : -std::log(kd * std::numbers::ln2);
    case Kind::kStretchedExp:
      return -std::pow(kd * std::numbers::ln2, param);
    case Kind::kCustom:
      return std::log((*this)(std::ldexp(1.0, static_cast<int>(k))));
  }
  return 0.0;
}

TailFunction parse_tail(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view() : text.substr(colon + 1);
  if (head == "log" || head == "LOG_TAIL") return TailFunction::log_tail();
  if (head == "poly" || head == "POLY") return TailFunction::poly(parse_number(arg, "poly alpha"));
  if (head == "stretched" || head == "STRETCHED_EXP") {
    return TailFunction::stretched_exp(parse_number(arg, "stretched beta"));
  }
  throw Error(ErrorCode::kInvalidParameter,
              "unknown tail '" + std::string(text) + "' (expected log, poly:<alpha> or stretched:<beta>)");
}

std::vector<double> u_sequence(const TailFunction& tail, std::size_t K) {
  std::vector<double> u;
  u.reserve(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    const double log_here = tail.log_at_dyadic(k);
    if (log_here == -std::numeric_limits<double>::infinity()) {
      throw Error(ErrorCode::kTailExhausted, "T(2^k) = 0 at k = " + std::to_string(k));
    }
    const double log_next = tail.log_at_dyadic(k + 1);
    // 1 - T(2^{k+1}) / T(2^k), without cancellation for small hazards.
    const double value = -std::expm1(log_next - log_here);
    u.push_back(std::clamp(value, 0.0, 1.0));
  }
  return u;
}

std::string_view to_string(PruittVerdict v) {
  switch (v) {
    case PruittVerdict::kConvergentTrend: return "CONVERGENT_TREND";
    case PruittVerdict::kDivergentTrend: return "DIVERGENT_TREND";
    case PruittVerdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

PruittDiagnostic pruitt_diagnostic(const std::vector<double>& u) {
  if (u.size() < 17) throw Error(ErrorCode::kInvalidInput, "Pruitt diagnostic needs K >= 16");
  PruittDiagnostic out;
  double sum = 0.0;
  for (double x : u) {
    sum += x * x;
    out.partial_sums.push_back(sum);
  }
  const std::size_t K = u.size() - 1;
  const std::size_t start = std::max<std::size_t>(1, K / 2);
  std::size_t zeros = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = start; k <= K; ++k) {
    const double sq = u[k] * u[k];
    if (sq == 0.0) ++zeros;
    lo = std::min(lo, sq);
    hi = std::max(hi, sq);
  }
  const std::size_t count = K - start + 1;
  if (zeros == count) {
    out.verdict = PruittVerdict::kConvergentTrend;
    return out;
  }
  if (zeros > 0) return out;
  if (hi / lo <= 2.0) {
    out.verdict = PruittVerdict::kDivergentTrend;
    return out;
  }
  // Least-squares fit of log u_k^2 against log k.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = start; k <= K; ++k) {
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(u[k] * u[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double n = static_cast<double>(count);
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  out.slope = vx > 0.0 ? cxy / vx : 0.0;
  out.r_squared = vx > 0.0 && vy > 0.0 ? cxy * cxy / (vx * vy) : 0.0;
  if (out.slope < -1.0 && out.r_squared >= 0.9) out.verdict = PruittVerdict::kConvergentTrend;
  return out;
}

std::string pruitt_csv(const TailFunction& tail, const std::vector<double>& u, const PruittDiagnostic& diagnostic) {
  std::string out = "k,T_2k,u_k,partial_sum\n";
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    sum += u[k] * u[k];
    const double partial = k < diagnostic.partial_sums.size() ? diagnostic.partial_sums[k] : sum;
    out += std::to_string(k) + ',' + ExtReal::from_log(tail.log_at_dyadic(k)).to_string() + ',' +
           format_double(u[k]) + ',' + format_double(partial) + '\n';
  }
  return out;
}

}  // namespace rwdir
