#include "rwdir/ext_real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>

namespace rwdir {

namespace {

// ldexp with an int64 shift; shifts beyond the double range saturate.
double shift(double value, std::int64_t by) {
  by = std::clamp<std::int64_t>(by, -4000, 4000);
  return std::ldexp(value, static_cast<int>(by));
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return "0";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

ExtReal::ExtReal(double value) : mantissa_(value) { normalize(); }

ExtReal ExtReal::from_parts(double mantissa, std::int64_t exponent) {
  ExtReal x;
  x.mantissa_ = mantissa;
  x.exponent_ = exponent;
  x.normalize();
  return x;
}

ExtReal ExtReal::from_log(double log_value) {
  if (std::isinf(log_value) && log_value < 0) return ExtReal();
  const double log2_value = log_value / std::numbers::ln2;
  const double whole = std::floor(log2_value);
  const double fraction = log_value - whole * std::numbers::ln2;
  return from_parts(std::exp(fraction), static_cast<std::int64_t>(whole));
}

void ExtReal::normalize() {
  if (mantissa_ == 0.0 || !std::isfinite(mantissa_)) {
    if (mantissa_ == 0.0) exponent_ = 0;
    return;
  }
  int k = 0;
  mantissa_ = std::frexp(mantissa_, &k);
  exponent_ += k;
}

double ExtReal::to_double() const { return shift(mantissa_, exponent_); }

double ExtReal::log() const {
  if (mantissa_ == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::fabs(mantissa_)) + static_cast<double>(exponent_) * std::numbers::ln2;
}

ExtReal& ExtReal::operator+=(const ExtReal& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (exponent_ >= other.exponent_) {
    mantissa_ += shift(other.mantissa_, other.exponent_ - exponent_);
  } else {
    mantissa_ = shift(mantissa_, exponent_ - other.exponent_) + other.mantissa_;
    exponent_ = other.exponent_;
  }
  normalize();
  return *this;
}

ExtReal& ExtReal::operator*=(const ExtReal& other) {
  mantissa_ *= other.mantissa_;
  exponent_ += other.exponent_;
  normalize();
  return *this;
}

ExtReal& ExtReal::operator/=(const ExtReal& other) {
  mantissa_ /= other.mantissa_;
  exponent_ -= other.exponent_;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  std::strong_ordering magnitude = a.exponent_ <=> b.exponent_;
  if (magnitude == std::strong_ordering::equal) {
    const double ma = std::fabs(a.mantissa_);
    const double mb = std::fabs(b.mantissa_);
    magnitude = ma < mb ? std::strong_ordering::less
                        : (ma > mb ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  if (sa > 0) return magnitude;
  return 0 <=> magnitude;
}

std::string ExtReal::to_string() const {
  const double value = to_double();
  if (std::isfinite(value) && (value != 0.0 || is_zero())) return format_double(value);
  const double log10_value = log() / std::numbers::ln10;
  const double decimal_exponent = std::floor(log10_value);
  const double decimal_mantissa = std::pow(10.0, log10_value - decimal_exponent) * sign();
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.15ge%.0f", decimal_mantissa, decimal_exponent);
  return buffer;
}

ExtVec ExtVec::from_components(std::span<const ExtReal> components) {
  ExtVec v(components.size());
  std::int64_t top = std::numeric_limits<std::int64_t>::min();
  for (const ExtReal& c : components) {
    if (!c.is_zero()) top = std::max(top, c.exponent());
  }
  if (top == std::numeric_limits<std::int64_t>::min()) return v;
  for (std::size_t i = 0; i < components.size(); ++i) {
    v.coords_[i] = components[i].is_zero() ? 0.0 : shift(components[i].mantissa(), components[i].exponent() - top);
  }
  v.exponent_ = top;
  v.normalize();
  return v;
}

bool ExtVec::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
}

void ExtVec::set_zero() {
  std::fill(coords_.begin(), coords_.end(), 0.0);
  exponent_ = 0;
}

void ExtVec::normalize() {
  double largest = 0.0;
  for (double c : coords_) largest = std::max(largest, std::fabs(c));
  if (largest == 0.0) {
    exponent_ = 0;
    return;
  }
  int k = 0;
  std::frexp(largest, &k);
  if (k == 0) return;
  for (double& c : coords_) c = std::ldexp(c, -k);
  exponent_ += k;
}

void ExtVec::add_parts(std::span<const double> coords, std::int64_t exponent) {
  if (is_zero()) {
    std::copy(coords.begin(), coords.end(), coords_.begin());
    exponent_ = exponent;
  } else if (exponent_ >= exponent) {
    const std::int64_t by = exponent - exponent_;
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += shift(coords[i], by);
  } else {
    const std::int64_t by = exponent_ - exponent;
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = shift(coords_[i], by) + coords[i];
    exponent_ = exponent;
  }
  normalize();
}

ExtVec& ExtVec::operator+=(const ExtVec& other) {
  if (!other.is_zero()) add_parts(other.coords_, other.exponent_);
  return *this;
}

void ExtVec::add_scaled(std::span<const double> direction, const ExtReal& scale) {
  if (scale.is_zero()) return;
  double scaled[16];
  std::vector<double> heap;
  double* out = scaled;
  if (direction.size() > 16) {
    heap.resize(direction.size());
    out = heap.data();
  }
  for (std::size_t i = 0; i < direction.size(); ++i) out[i] = direction[i] * scale.mantissa();
  add_parts(std::span<const double>(out, direction.size()), scale.exponent());
}

ExtReal ExtVec::norm() const {
  double sum = 0.0;
  for (double c : coords_) sum += c * c;
  return ExtReal::from_parts(std::sqrt(sum), exponent_);
}

void ExtVec::direction(std::span<double> out) const {
  double sum = 0.0;
  for (double c : coords_) sum += c * c;
  const double length = std::sqrt(sum);
  for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = length > 0.0 ? coords_[i] / length : 0.0;
}

void ExtVec::to_doubles(std::span<double> out) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = shift(coords_[i], exponent_);
}

}  // namespace rwdir
