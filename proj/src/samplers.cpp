#include "rwdir/samplers.hpp"

#include <cmath>
#include <numbers>

#include "rwdir/error.hpp"

namespace rwdir {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidParameter, "alpha must be a finite number > 0");
  }
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, bool& saturated) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out) || out > kSaturationCap || out < -kSaturationCap) {
    saturated = true;
    return ((a < 0) != (b < 0)) ? -kSaturationCap : kSaturationCap;
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b, bool& saturated) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    saturated = true;
    return a > 0 ? kSaturationCap : -kSaturationCap;
  }
  if (out > kSaturationCap || out < -kSaturationCap) {
    saturated = true;
    return out > 0 ? kSaturationCap : -kSaturationCap;
  }
  return out;
}

}  // namespace

int sample_rademacher(RandomStream& rng) { return rng.rademacher(); }

std::int64_t s_magnitude_from_uniform(double u, double alpha, bool* saturated) {
  require_alpha(alpha);
  // log2 of U^{-1/alpha}; compare in log space so huge values never overflow.
  const double log2_value = -std::log2(u) / alpha;
  if (log2_value >= 62.0) {
    if (saturated != nullptr) *saturated = true;
    return kSaturationCap;
  }
  const double value = std::floor(std::pow(u, -1.0 / alpha));
  if (value >= static_cast<double>(kSaturationCap)) {
    if (saturated != nullptr) *saturated = true;
    return kSaturationCap;
  }
  return value < 1.0 ? 1 : static_cast<std::int64_t>(value);
}

std::int64_t sample_s_one_sided(RandomStream& rng, double alpha, std::uint64_t* saturations) {
  require_alpha(alpha);
  bool saturated = false;
  const std::int64_t zeta = s_magnitude_from_uniform(rng.uniform(), alpha, &saturated);
  if (saturated && saturations != nullptr) ++*saturations;
  return zeta;
}

std::int64_t sample_s_two_sided(RandomStream& rng, double alpha, std::uint64_t* saturations) {
  const std::int64_t magnitude = sample_s_one_sided(rng, alpha, saturations);
  return rng.rademacher() * magnitude;
}

ExtReal log_tail_from_uniform(double u) { return ExtReal::from_log(1.0 / u); }

ExtReal stretched_exp_from_exponential(double e, double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw Error(ErrorCode::kInvalidParameter, "beta must lie in (0, 1/2)");
  return ExtReal::from_log(std::pow(e, 1.0 / beta));
}

ExtReal sample_heavy_tail(RandomStream& rng, const ScalarLaw& family) {
  switch (family.kind) {
    case LawKind::kLogTail:
      return log_tail_from_uniform(rng.uniform());
    case LawKind::kStretchedExp:
      return stretched_exp_from_exponential(rng.exponential(), family.param);
    default:
      throw Error(ErrorCode::kInvalidParameter, "heavy-tail family must be LOG_TAIL or STRETCHED_EXP");
  }
}

IncrementSampler::IncrementSampler(IncrementSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  lattice_ = is_lattice(spec_);
  if (spec_.drift.empty()) spec_.drift.assign(spec_.dimension, 0.0);
  if (spec_.form == SpecForm::kRadialProduct) {
    double total = 0.0;
    for (const Atom& atom : spec_.atoms) {
      total += atom.probability;
      cumulative_.push_back(total);
    }
    for (double& c : cumulative_) c /= total;
  }
  if (lattice_) {
    for (double x : spec_.drift) lattice_drift_.push_back(static_cast<std::int64_t>(x));
    for (const Atom& atom : spec_.atoms) {
      std::vector<std::int64_t> v;
      for (double x : atom.vector) v.push_back(static_cast<std::int64_t>(x));
      lattice_vectors_.push_back(std::move(v));
    }
  }
}

IncrementSampler::Scalar IncrementSampler::draw_scalar(const ScalarLaw& law, RandomStream& rng) const {
  Scalar s;
  switch (law.kind) {
    case LawKind::kRademacher:
      s.integer = rng.rademacher();
      break;
    case LawKind::kSTwoSided: {
      s.integer = s_magnitude_from_uniform(rng.uniform(), law.param, &s.saturated);
      s.integer *= rng.rademacher();
      break;
    }
    case LawKind::kSOneSided:
      s.integer = s_magnitude_from_uniform(rng.uniform(), law.param, &s.saturated);
      break;
    case LawKind::kLogTail:
    case LawKind::kStretchedExp:
      s.real = sample_heavy_tail(rng, law);
      return s;
    case LawKind::kConstant:
      s.real = ExtReal(law.param);
      s.integer = static_cast<std::int64_t>(law.param);
      return s;
  }
  s.real = ExtReal(static_cast<double>(s.integer));
  return s;
}

void IncrementSampler::draw(RandomStream& rng, IncrementDraw& out) const {
  const std::size_t d = spec_.dimension;
  out.saturated = false;
  if (lattice_) {
    out.lattice.assign(lattice_drift_.begin(), lattice_drift_.end());
    out.real.clear();
  } else {
    out.lattice.clear();
    out.real.assign(d, ExtReal());
    for (std::size_t i = 0; i < d; ++i) out.real[i] = ExtReal(spec_.drift[i]);
  }

  switch (spec_.form) {
    case SpecForm::kCoordinateProduct:
      for (std::size_t i = 0; i < d; ++i) {
        const Scalar s = draw_scalar(spec_.laws[i], rng);
        out.saturated |= s.saturated;
        if (lattice_) {
          out.lattice[i] = checked_add(out.lattice[i], s.integer, out.saturated);
        } else {
          out.real[i] += s.real;
        }
      }
      break;
    case SpecForm::kRadialProduct: {
      // Direction first, then magnitude; the two draws are independent.
      const double u = rng.uniform();
      std::size_t atom = cumulative_.size() - 1;
      for (std::size_t j = 0; j < cumulative_.size(); ++j) {
        if (u <= cumulative_[j]) {
          atom = j;
          break;
        }
      }
      const Scalar s = draw_scalar(spec_.laws.front(), rng);
      out.saturated |= s.saturated;
      out.atom = atom;
      out.xi = s.real;
      if (lattice_) {
        for (std::size_t i = 0; i < d; ++i) {
          out.lattice[i] = checked_mul(lattice_vectors_[atom][i], s.integer, out.saturated);
        }
      } else {
        for (std::size_t i = 0; i < d; ++i) out.real[i] = ExtReal(spec_.atoms[atom].vector[i]) * s.real;
      }
      break;
    }
    case SpecForm::kLinearCombination:
      for (std::size_t j = 0; j < spec_.atoms.size(); ++j) {
        const Scalar s = draw_scalar(spec_.laws[j], rng);
        out.saturated |= s.saturated;
        for (std::size_t i = 0; i < d; ++i) {
          if (lattice_) {
            const std::int64_t term = checked_mul(lattice_vectors_[j][i], s.integer, out.saturated);
            out.lattice[i] = checked_add(out.lattice[i], term, out.saturated);
          } else {
            out.real[i] += ExtReal(spec_.atoms[j].vector[i]) * s.real;
          }
        }
      }
      break;
  }
}

IncrementDraw IncrementSampler::draw(RandomStream& rng) const {
  IncrementDraw out;
  draw(rng, out);
  return out;
}

IncrementSampler make_increment_sampler(const IncrementSpec& spec) { return IncrementSampler(spec); }

}  // namespace rwdir
