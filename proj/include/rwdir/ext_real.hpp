#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rwdir {

// Real number m * 2^e with 0.5 <= |m| < 1 (or m == 0) and a 64-bit exponent.
// Used where heavy-tailed magnitudes (exp(1/U) and friends) leave the range of
// a double after a few hundred steps.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  explicit ExtReal(double value);

  static ExtReal from_parts(double mantissa, std::int64_t exponent);
  // exp(log_value)
  static ExtReal from_log(double log_value);

  double mantissa() const { return mantissa_; }
  std::int64_t exponent() const { return exponent_; }

  bool is_zero() const { return mantissa_ == 0.0; }
  int sign() const { return (mantissa_ > 0.0) - (mantissa_ < 0.0); }
  // Nearest double; +-inf when out of range, 0 on underflow.
  double to_double() const;
  // Natural log of |x|; -inf for zero.
  double log() const;

  ExtReal operator-() const { return from_parts(-mantissa_, exponent_); }
  ExtReal& operator+=(const ExtReal& other);
  ExtReal& operator-=(const ExtReal& other) { return *this += -other; }
  ExtReal& operator*=(const ExtReal& other);
  ExtReal& operator/=(const ExtReal& other);

  friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
  friend ExtReal operator-(ExtReal a, const ExtReal& b) { return a -= b; }
  friend ExtReal operator*(ExtReal a, const ExtReal& b) { return a *= b; }
  friend ExtReal operator/(ExtReal a, const ExtReal& b) { return a /= b; }

  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b);
  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
  }

  // Shortest round-trip decimal for values inside the double range,
  // otherwise "<mantissa>e<decimal exponent>" with 15 significant digits.
  std::string to_string() const;

 private:
  void normalize();

  double mantissa_ = 0.0;
  std::int64_t exponent_ = 0;
};

// Vector 2^e * c with one shared binary exponent; max |c_i| in [0.5, 1).
class ExtVec {
 public:
  explicit ExtVec(std::size_t dimension = 0) : coords_(dimension, 0.0) {}
  static ExtVec from_components(std::span<const ExtReal> components);

  std::size_t size() const { return coords_.size(); }
  bool is_zero() const;
  std::int64_t exponent() const { return exponent_; }
  std::span<const double> scaled_coords() const { return coords_; }

  ExtReal component(std::size_t i) const { return ExtReal::from_parts(coords_[i], exponent_); }
  void set_zero();

  ExtVec& operator+=(const ExtVec& other);
  // this += scale * direction
  void add_scaled(std::span<const double> direction, const ExtReal& scale);

  ExtReal norm() const;
  // Unit vector along this; the zero vector at the origin.
  void direction(std::span<double> out) const;
  // Components as doubles (+-inf when out of range).
  void to_doubles(std::span<double> out) const;

 private:
  void add_parts(std::span<const double> coords, std::int64_t exponent);
  void normalize();

  std::vector<double> coords_;
  std::int64_t exponent_ = 0;
};

std::string format_double(double value);

}  // namespace rwdir
