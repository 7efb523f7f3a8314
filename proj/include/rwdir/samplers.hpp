#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rwdir/ext_real.hpp"
#include "rwdir/increment_spec.hpp"
#include "rwdir/rng.hpp"

namespace rwdir {

// Integer magnitudes floor(U^{-1/alpha}) above this value are clamped to it.
inline constexpr std::int64_t kSaturationCap = std::int64_t{1} << 62;

int sample_rademacher(RandomStream& rng);

// floor(u^{-1/alpha}) for u in (0, 1], clamped to kSaturationCap. Sets
// *saturated when clamping happened.
std::int64_t s_magnitude_from_uniform(double u, double alpha, bool* saturated = nullptr);

// Two-sided S(alpha): |zeta| = floor(U^{-1/alpha}) with an independent sign.
std::int64_t sample_s_two_sided(RandomStream& rng, double alpha, std::uint64_t* saturations = nullptr);
// One-sided S_+(alpha): floor(U^{-1/alpha}).
std::int64_t sample_s_one_sided(RandomStream& rng, double alpha, std::uint64_t* saturations = nullptr);

// Heavy-tailed magnitudes, returned in extended range because exp(1/U)
// leaves the double range whenever U < 1/709.
//   LOG_TAIL:          exp(1/U),       P(xi > r) = 1/log r for r >= e
//   STRETCHED_EXP(b):  exp(E^{1/b}),   P(xi > r) = exp(-(log r)^b)
ExtReal sample_heavy_tail(RandomStream& rng, const ScalarLaw& family);
ExtReal log_tail_from_uniform(double u);
ExtReal stretched_exp_from_exponential(double e, double beta);

// One increment. Lattice specs fill `lattice`, the others fill `real`.
// RADIAL_PRODUCT also reports the drawn magnitude and direction atom.
struct IncrementDraw {
  std::vector<std::int64_t> lattice;
  std::vector<ExtReal> real;
  ExtReal xi;
  std::size_t atom = 0;
  bool saturated = false;
};

class IncrementSampler {
 public:
  // Validates the spec; throws Error(kInvalidSpec / kInvalidParameter).
  explicit IncrementSampler(IncrementSpec spec);

  const IncrementSpec& spec() const { return spec_; }
  std::size_t dimension() const { return spec_.dimension; }
  bool lattice() const { return lattice_; }
  bool radial() const { return spec_.form == SpecForm::kRadialProduct; }

  void draw(RandomStream& rng, IncrementDraw& out) const;
  IncrementDraw draw(RandomStream& rng) const;

 private:
  struct Scalar {
    std::int64_t integer = 0;
    ExtReal real;
    bool saturated = false;
  };
  Scalar draw_scalar(const ScalarLaw& law, RandomStream& rng) const;

  IncrementSpec spec_;
  bool lattice_ = false;
  std::vector<double> cumulative_;
  std::vector<std::int64_t> lattice_drift_;
  std::vector<std::vector<std::int64_t>> lattice_vectors_;
};

IncrementSampler make_increment_sampler(const IncrementSpec& spec);

}  // namespace rwdir
