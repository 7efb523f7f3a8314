#include <doctest.h>

#include <string>

#include "rwdir/error.hpp"
#include "rwdir/increment_spec.hpp"

using namespace rwdir;

namespace {

ErrorCode code_of(const IncrementSpec& spec) {
  try {
    validate(spec);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validation to fail");
  return ErrorCode::kIo;
}

std::string message_of(const nlohmann::json& j) {
  try {
    spec_from_json(j);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("valid specs") {
  CHECK_NOTHROW(validate({2, SpecForm::kCoordinateProduct, {ScalarLaw::rademacher(), ScalarLaw::s_two_sided(0.5)}, {}, {}}));
  CHECK_NOTHROW(validate({2, SpecForm::kRadialProduct, {ScalarLaw::log_tail()}, {{{1, 0}, 0.5}, {{0, 1}, 0.5}}, {}}));
  CHECK(support_rank({2, SpecForm::kCoordinateProduct, {ScalarLaw::constant(1.0), ScalarLaw::rademacher()}, {}, {}}) == 2);
  CHECK(is_lattice({2, SpecForm::kCoordinateProduct, {ScalarLaw::constant(1.0), ScalarLaw::rademacher()}, {}, {}}));
  CHECK_FALSE(is_lattice({2, SpecForm::kCoordinateProduct, {ScalarLaw::constant(0.5), ScalarLaw::rademacher()}, {}, {}}));
}

TEST_CASE("invalid specs are rejected with the right code") {
  CHECK(code_of({2, SpecForm::kCoordinateProduct, {ScalarLaw::rademacher(), ScalarLaw::s_two_sided(0.0)}, {}, {}}) ==
        ErrorCode::kInvalidParameter);
  CHECK(code_of({2, SpecForm::kCoordinateProduct, {ScalarLaw::rademacher(), ScalarLaw::s_two_sided(-1.0)}, {}, {}}) ==
        ErrorCode::kInvalidParameter);
  CHECK(code_of({2, SpecForm::kRadialProduct, {ScalarLaw::stretched_exp(0.5)}, {{{1, 0}, 0.5}, {{0, 1}, 0.5}}, {}}) ==
        ErrorCode::kInvalidParameter);
  // Support inside a line.
  CHECK(code_of({2, SpecForm::kCoordinateProduct, {ScalarLaw::rademacher(), ScalarLaw::constant(0.0)}, {}, {}}) ==
        ErrorCode::kInvalidSpec);
  CHECK(code_of({2, SpecForm::kRadialProduct, {ScalarLaw::log_tail()}, {{{1, 0}, 0.5}, {{-1, 0}, 0.5}}, {}}) ==
        ErrorCode::kInvalidSpec);
  // Atom not of unit norm.
  CHECK(code_of({2, SpecForm::kRadialProduct, {ScalarLaw::log_tail()}, {{{1, 0}, 0.5}, {{0, 1.001}, 0.5}}, {}}) ==
        ErrorCode::kInvalidSpec);
  // Probabilities not summing to one.
  CHECK(code_of({2, SpecForm::kRadialProduct, {ScalarLaw::log_tail()}, {{{1, 0}, 0.5}, {{0, 1}, 0.4}}, {}}) ==
        ErrorCode::kInvalidSpec);
  CHECK(code_of({2, SpecForm::kCoordinateProduct, {ScalarLaw::rademacher()}, {}, {}}) == ErrorCode::kInvalidSpec);
}

TEST_CASE("JSON round trip") {
  const std::vector<IncrementSpec> specs = {
      {2, SpecForm::kCoordinateProduct, {ScalarLaw::constant(1.0), ScalarLaw::s_two_sided(2.0)}, {}, {0.0, 0.0}},
      {3,
       SpecForm::kLinearCombination,
       {ScalarLaw::s_one_sided(0.5), ScalarLaw::s_one_sided(0.5), ScalarLaw::rademacher()},
       {{{1, 0, 0}, 0.0}, {{0, 1, 0}, 0.0}, {{0, 0, 1}, 0.0}},
       {0.0, 0.0, 0.0}},
      {2, SpecForm::kRadialProduct, {ScalarLaw::stretched_exp(0.3)}, {{{1, 0}, 0.5}, {{0, -1}, 0.5}}, {0.0, 0.0}},
  };
  for (const IncrementSpec& spec : specs) {
    const nlohmann::json j = to_json(spec);
    CHECK(spec_from_json(j) == spec);
    CHECK(spec_from_json(nlohmann::json::parse(j.dump())) == spec);
  }
}

TEST_CASE("JSON errors name the field") {
  nlohmann::json j = {{"dimension", 2},
                      {"form", "COORDINATE_PRODUCT"},
                      {"laws", {{{"law", "RADEMACHER"}}, {{"law", "S_TWO_SIDED"}, {"alpha", -0.5}}}}};
  CHECK(message_of(j).find("spec.laws[1].alpha") != std::string::npos);
  j["laws"][1]["alpha"] = 0.5;
  j["form"] = "SOMETHING";
  CHECK(message_of(j).find("spec.form") != std::string::npos);
  j["form"] = "COORDINATE_PRODUCT";
  j["laws"][0]["law"] = "GAUSSIAN";
  CHECK(message_of(j).find("spec.laws[0].law") != std::string::npos);
  j["laws"][0]["law"] = "RADEMACHER";
  CHECK(message_of(j).empty());
}
