#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "cho/types.hpp"

using namespace cho;

TEST_SUITE("types") {
  TEST_CASE("sheet labels round-trip through index and text") {
    std::set<int> seen;
    for (const auto& s : SheetLabel::all()) {
      CHECK(SheetLabel::from_index(s.index()) == s);
      CHECK(SheetLabel::parse(s.str()) == s);
      seen.insert(s.index());
    }
    CHECK(seen.size() == 8);
    CHECK(SheetLabel::parse("(+,-,+)") == SheetLabel{Sign::plus, Sign::minus, Sign::plus});
    CHECK(SheetLabel::parse("-,-,+") == SheetLabel{Sign::minus, Sign::minus, Sign::plus});
    CHECK_THROWS_AS(SheetLabel::parse("++"), Error);
    CHECK_THROWS_AS(SheetLabel::parse("+x+"), Error);
    CHECK_THROWS_AS(SheetLabel::from_index(8), Error);
  }

  TEST_CASE("LevelSpec validation") {
    CHECK_NOTHROW(LevelSpec(0, 0));
    CHECK_NOTHROW(LevelSpec(3, 1));
    CHECK_NOTHROW(LevelSpec(4, 4));
    CHECK_THROWS_AS(LevelSpec(1, 0), Error);
    CHECK_THROWS_AS(LevelSpec(2, 3), Error);
    CHECK_THROWS_AS(LevelSpec(-1, 1), Error);
    CHECK(LevelSpec(2, 0).quartet());
    CHECK_FALSE(LevelSpec(2, 2).quartet());
  }

  TEST_CASE("frequencies must be positive and finite") {
    CHECK_THROWS_AS(Frequencies(0.0, 1.0), Error);
    CHECK_THROWS_AS(Frequencies(1.0, -2.0), Error);
    CHECK_THROWS_AS(Frequencies(std::nan(""), 1.0), Error);
    CHECK(Frequencies(1.0, 1.0 + 1e-12).equal());
    CHECK_FALSE(Frequencies(2.0, 1.0).equal());
    CHECK(Frequencies(1.0, 2.0).ordering() == Sign::minus);
  }

  TEST_CASE("principal sqrt takes the upper limit on the cut") {
    CHECK(principal_sqrt(Complex(-4.0, 0.0)) == Complex(0.0, 2.0));
    CHECK(principal_sqrt(Complex(-4.0, -0.0)) == Complex(0.0, 2.0));
    const Complex below = principal_sqrt(Complex(-4.0, -1e-300));
    CHECK(below.imag() < 0.0);
    CHECK(principal_sqrt(Complex(9.0, 0.0)) == Complex(3.0, 0.0));
  }

  TEST_CASE("error codes") {
    CHECK(to_string(ErrorCode::path_hits_branch_point) == "path-hits-branch-point");
    CHECK(is_validation_error(ErrorCode::invalid_input));
    CHECK_FALSE(is_validation_error(ErrorCode::no_convergence));
    CHECK_THROWS_AS(require_finite(Complex(std::numeric_limits<double>::infinity(), 0.0), "g"), Error);
  }
}
