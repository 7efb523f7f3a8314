#include "rwdir/increment_spec.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

#include "rwdir/error.hpp"

namespace rwdir {

namespace {

constexpr double kUnitTolerance = 1e-12;
constexpr double kProbabilityTolerance = 1e-9;

bool is_integral(double x) { return std::isfinite(x) && std::floor(x) == x; }

// Two points of the support of a scalar law; equal when the law is degenerate.
std::pair<double, double> support_pair(const ScalarLaw& law) {
  switch (law.kind) {
    case LawKind::kRademacher:
    case LawKind::kSTwoSided:
      return {1.0, -1.0};
    case LawKind::kSOneSided:
      return {1.0, 2.0};
    case LawKind::kLogTail:
      return {std::numbers::e, std::numbers::e * std::numbers::e};
    case LawKind::kStretchedExp:
      return {1.0, std::numbers::e};
    case LawKind::kConstant:
      return {law.param, law.param};
  }
  return {0.0, 0.0};
}

std::size_t rank_of(const std::vector<std::vector<double>>& points, std::size_t dimension) {
  if (points.empty()) return 0;
  Eigen::MatrixXd m(dimension, points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t i = 0; i < dimension; ++i) m(i, j) = points[j][i];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<std::size_t>(lu.rank());
}

std::vector<double> drift_or_zero(const IncrementSpec& spec) {
  if (spec.drift.empty()) return std::vector<double>(spec.dimension, 0.0);
  return spec.drift;
}

void check_law(const ScalarLaw& law, const std::string& path) {
  switch (law.kind) {
    case LawKind::kSTwoSided:
    case LawKind::kSOneSided:
      if (!(law.param > 0.0) || !std::isfinite(law.param)) {
        throw Error(ErrorCode::kInvalidParameter, path + ".alpha: must be a finite number > 0");
      }
      break;
    case LawKind::kStretchedExp:
      if (!(law.param > 0.0 && law.param < 0.5)) {
        throw Error(ErrorCode::kInvalidParameter, path + ".beta: must lie in (0, 1/2)");
      }
      break;
    case LawKind::kConstant:
      if (!std::isfinite(law.param)) throw Error(ErrorCode::kInvalidParameter, path + ".c: must be finite");
      break;
    default:
      break;
  }
}

LawKind law_kind_from(const std::string& name, const std::string& path) {
  if (name == "RADEMACHER") return LawKind::kRademacher;
  if (name == "S_TWO_SIDED") return LawKind::kSTwoSided;
  if (name == "S_ONE_SIDED") return LawKind::kSOneSided;
  if (name == "LOG_TAIL") return LawKind::kLogTail;
  if (name == "STRETCHED_EXP") return LawKind::kStretchedExp;
  if (name == "CONSTANT") return LawKind::kConstant;
  throw Error(ErrorCode::kInvalidSpec, path + ": unknown law '" + name + "'");
}

SpecForm form_from(const std::string& name, const std::string& path) {
  if (name == "COORDINATE_PRODUCT") return SpecForm::kCoordinateProduct;
  if (name == "RADIAL_PRODUCT") return SpecForm::kRadialProduct;
  if (name == "LINEAR_COMBINATION") return SpecForm::kLinearCombination;
  throw Error(ErrorCode::kInvalidSpec, path + ": unknown form '" + name + "'");
}

const nlohmann::json& field(const nlohmann::json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kInvalidSpec, path + "." + key + ": missing");
  }
  return j.at(key);
}

double number_at(const nlohmann::json& j, const char* key, const std::string& path) {
  const nlohmann::json& v = field(j, key, path);
  if (!v.is_number()) throw Error(ErrorCode::kInvalidSpec, path + "." + key + ": expected a number");
  return v.get<double>();
}

std::vector<double> vector_at(const nlohmann::json& v, const std::string& path) {
  if (!v.is_array()) throw Error(ErrorCode::kInvalidSpec, path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw Error(ErrorCode::kInvalidSpec, path + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace

std::string_view to_string(LawKind kind) {
  switch (kind) {
    case LawKind::kRademacher: return "RADEMACHER";
    case LawKind::kSTwoSided: return "S_TWO_SIDED";
    case LawKind::kSOneSided: return "S_ONE_SIDED";
    case LawKind::kLogTail: return "LOG_TAIL";
    case LawKind::kStretchedExp: return "STRETCHED_EXP";
    case LawKind::kConstant: return "CONSTANT";
  }
  return "?";
}

std::string_view to_string(SpecForm form) {
  switch (form) {
    case SpecForm::kCoordinateProduct: return "COORDINATE_PRODUCT";
    case SpecForm::kRadialProduct: return "RADIAL_PRODUCT";
    case SpecForm::kLinearCombination: return "LINEAR_COMBINATION";
  }
  return "?";
}

bool ScalarLaw::integer_valued() const {
  switch (kind) {
    case LawKind::kRademacher:
    case LawKind::kSTwoSided:
    case LawKind::kSOneSided:
      return true;
    case LawKind::kConstant:
      return is_integral(param);
    default:
      return false;
  }
}

bool ScalarLaw::nonnegative() const {
  switch (kind) {
    case LawKind::kSOneSided:
    case LawKind::kLogTail:
    case LawKind::kStretchedExp:
      return true;
    case LawKind::kConstant:
      return param >= 0.0;
    default:
      return false;
  }
}

std::size_t support_rank(const IncrementSpec& spec) {
  const std::size_t d = spec.dimension;
  const std::vector<double> drift = drift_or_zero(spec);
  std::vector<std::vector<double>> points;
  switch (spec.form) {
    case SpecForm::kCoordinateProduct: {
      std::vector<double> base(d);
      for (std::size_t i = 0; i < d; ++i) base[i] = support_pair(spec.laws[i]).first + drift[i];
      points.push_back(base);
      for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> p = base;
        p[i] = support_pair(spec.laws[i]).second + drift[i];
        points.push_back(std::move(p));
      }
      break;
    }
    case SpecForm::kRadialProduct: {
      const auto [a, b] = support_pair(spec.laws.front());
      const double magnitude = a != 0.0 ? a : b;
      if (magnitude == 0.0) return 0;
      for (const Atom& atom : spec.atoms) points.push_back(atom.vector);
      break;
    }
    case SpecForm::kLinearCombination: {
      auto combine = [&](std::size_t varied) {
        std::vector<double> p = drift;
        for (std::size_t j = 0; j < spec.atoms.size(); ++j) {
          const auto [a, b] = support_pair(spec.laws[j]);
          const double z = j == varied ? b : a;
          for (std::size_t i = 0; i < d; ++i) p[i] += z * spec.atoms[j].vector[i];
        }
        return p;
      };
      points.push_back(combine(spec.atoms.size()));
      for (std::size_t j = 0; j < spec.atoms.size(); ++j) points.push_back(combine(j));
      break;
    }
  }
  return rank_of(points, d);
}

void validate(const IncrementSpec& spec) {
  const std::size_t d = spec.dimension;
  if (d == 0) throw Error(ErrorCode::kInvalidSpec, "dimension: must be >= 1");
  for (std::size_t i = 0; i < spec.laws.size(); ++i) check_law(spec.laws[i], "laws[" + std::to_string(i) + "]");
  if (!spec.drift.empty()) {
    if (spec.drift.size() != d) throw Error(ErrorCode::kInvalidSpec, "drift: length must equal dimension");
    for (double x : spec.drift) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidSpec, "drift: components must be finite");
    }
  }
  for (std::size_t j = 0; j < spec.atoms.size(); ++j) {
    if (spec.atoms[j].vector.size() != d) {
      throw Error(ErrorCode::kInvalidSpec, "atoms[" + std::to_string(j) + "].v: length must equal dimension");
    }
  }

  switch (spec.form) {
    case SpecForm::kCoordinateProduct:
      if (spec.laws.size() != d) throw Error(ErrorCode::kInvalidSpec, "laws: COORDINATE_PRODUCT needs one law per coordinate");
      if (!spec.atoms.empty()) throw Error(ErrorCode::kInvalidSpec, "atoms: must be empty for COORDINATE_PRODUCT");
      break;
    case SpecForm::kRadialProduct: {
      if (spec.laws.size() != 1) throw Error(ErrorCode::kInvalidSpec, "laws: RADIAL_PRODUCT needs exactly one magnitude law");
      if (!spec.laws.front().nonnegative()) {
        throw Error(ErrorCode::kInvalidSpec, "laws[0]: RADIAL_PRODUCT magnitude law must be nonnegative");
      }
      if (spec.atoms.empty()) throw Error(ErrorCode::kInvalidSpec, "atoms: RADIAL_PRODUCT needs at least one direction atom");
      double total = 0.0;
      for (std::size_t j = 0; j < spec.atoms.size(); ++j) {
        const Atom& atom = spec.atoms[j];
        double norm2 = 0.0;
        for (double x : atom.vector) norm2 += x * x;
        if (std::fabs(std::sqrt(norm2) - 1.0) > kUnitTolerance) {
          throw Error(ErrorCode::kInvalidSpec, "atoms[" + std::to_string(j) + "].v: direction atoms must have unit norm");
        }
        if (!(atom.probability > 0.0)) {
          throw Error(ErrorCode::kInvalidSpec, "atoms[" + std::to_string(j) + "].p: must be > 0");
        }
        total += atom.probability;
      }
      if (std::fabs(total - 1.0) > kProbabilityTolerance) {
        throw Error(ErrorCode::kInvalidSpec, "atoms: probabilities must sum to 1");
      }
      for (double x : spec.drift) {
        if (x != 0.0) throw Error(ErrorCode::kInvalidSpec, "drift: RADIAL_PRODUCT does not take a drift");
      }
      break;
    }
    case SpecForm::kLinearCombination:
      if (spec.atoms.empty() || spec.laws.size() != spec.atoms.size()) {
        throw Error(ErrorCode::kInvalidSpec, "laws: LINEAR_COMBINATION needs one law per vector in atoms");
      }
      break;
  }

  const std::size_t rank = support_rank(spec);
  if (rank < d) {
    throw Error(ErrorCode::kInvalidSpec, "genuinely d-dimensional: support of X spans " + std::to_string(rank) +
                                             " of " + std::to_string(d) + " dimensions");
  }
}

bool is_lattice(const IncrementSpec& spec) {
  for (const ScalarLaw& law : spec.laws) {
    if (!law.integer_valued()) return false;
  }
  for (double x : spec.drift) {
    if (!is_integral(x)) return false;
  }
  for (const Atom& atom : spec.atoms) {
    for (double x : atom.vector) {
      if (!is_integral(x)) return false;
    }
  }
  return true;
}

nlohmann::json to_json(const IncrementSpec& spec) {
  nlohmann::json laws = nlohmann::json::array();
  for (const ScalarLaw& law : spec.laws) {
    nlohmann::json l = {{"law", std::string(to_string(law.kind))}};
    switch (law.kind) {
      case LawKind::kSTwoSided:
      case LawKind::kSOneSided:
        l["alpha"] = law.param;
        break;
      case LawKind::kStretchedExp:
        l["beta"] = law.param;
        break;
      case LawKind::kConstant:
        l["c"] = law.param;
        break;
      default:
        break;
    }
    laws.push_back(std::move(l));
  }
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& atom : spec.atoms) {
    nlohmann::json a = {{"v", atom.vector}};
    if (spec.form == SpecForm::kRadialProduct) a["p"] = atom.probability;
    atoms.push_back(std::move(a));
  }
  return {
      {"dimension", spec.dimension},
      {"form", std::string(to_string(spec.form))},
      {"laws", std::move(laws)},
      {"atoms", std::move(atoms)},
      {"drift", drift_or_zero(spec)},
  };
}

IncrementSpec spec_from_json(const nlohmann::json& j, std::string_view path_view) {
  const std::string path(path_view);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidSpec, path + ": expected an object");
  IncrementSpec spec;
  const nlohmann::json& dim = field(j, "dimension", path);
  if (!dim.is_number_integer() || dim.get<long long>() < 1) {
    throw Error(ErrorCode::kInvalidSpec, path + ".dimension: expected a positive integer");
  }
  spec.dimension = dim.get<std::size_t>();
  const nlohmann::json& form = field(j, "form", path);
  if (!form.is_string()) throw Error(ErrorCode::kInvalidSpec, path + ".form: expected a string");
  spec.form = form_from(form.get<std::string>(), path + ".form");

  const nlohmann::json& laws = field(j, "laws", path);
  if (!laws.is_array()) throw Error(ErrorCode::kInvalidSpec, path + ".laws: expected an array");
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const std::string lp = path + ".laws[" + std::to_string(i) + "]";
    const nlohmann::json& name = field(laws[i], "law", lp);
    if (!name.is_string()) throw Error(ErrorCode::kInvalidSpec, lp + ".law: expected a string");
    ScalarLaw law{law_kind_from(name.get<std::string>(), lp + ".law"), 0.0};
    switch (law.kind) {
      case LawKind::kSTwoSided:
      case LawKind::kSOneSided:
        law.param = number_at(laws[i], "alpha", lp);
        break;
      case LawKind::kStretchedExp:
        law.param = number_at(laws[i], "beta", lp);
        break;
      case LawKind::kConstant:
        law.param = number_at(laws[i], "c", lp);
        break;
      default:
        break;
    }
    check_law(law, lp);
    spec.laws.push_back(law);
  }

  if (j.contains("atoms")) {
    const nlohmann::json& atoms = j.at("atoms");
    if (!atoms.is_array()) throw Error(ErrorCode::kInvalidSpec, path + ".atoms: expected an array");
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::string ap = path + ".atoms[" + std::to_string(k) + "]";
      Atom atom;
      atom.vector = vector_at(field(atoms[k], "v", ap), ap + ".v");
      if (spec.form == SpecForm::kRadialProduct) atom.probability = number_at(atoms[k], "p", ap);
      spec.atoms.push_back(std::move(atom));
    }
  }
  if (j.contains("drift")) {
    spec.drift = vector_at(j.at("drift"), path + ".drift");
  } else {
    spec.drift.assign(spec.dimension, 0.0);
  }

  try {
    validate(spec);
  } catch (const Error& e) {
    throw Error(e.code(), path + "." + e.message());
  }
  return spec;
}

}  // namespace rwdir
