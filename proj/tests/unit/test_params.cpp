#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bwave/params.hpp"

using namespace bwave;

namespace {

bool names(const RegimeReport& r, const std::string& v) {
  return std::find(r.violations.begin(), r.violations.end(), v) != r.violations.end();
}

}  // namespace

TEST_CASE("model map at theta = 1 kills c and d") {
  const Coefficients co = abcd_from_model({1.0, 1.0, 1.0, 0.0});
  CHECK(co.a == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(co.b == 0.0);
  CHECK(co.c == 0.0);
  CHECK(co.d == 0.0);
}

TEST_CASE("model map with surface tension") {
  const Coefficients co = abcd_from_model({0.0, 1.0, 1.0, 1.0});
  CHECK(co.a == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
  CHECK(co.b == 0.0);
  CHECK(co.c == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(co.d == 0.0);
}

TEST_CASE("degenerate theta^2 = 1/3, tau = 1/3 leaves the regime") {
  const Coefficients co = abcd_from_model({std::sqrt(1.0 / 3.0), 1.0, 1.0, 1.0 / 3.0});
  CHECK(std::abs(co.a) < 1e-15);
  CHECK(std::abs(co.c) < 1e-15);
  const RegimeReport r = validate_solver_regime(co);
  CHECK_FALSE(r.accepted);
  CHECK(names(r, "a>=0"));
  CHECK(names(r, "c>=0"));
}

TEST_CASE("lambda = mu = 1 gives b = d = 0 for any theta and Bond number") {
  for (double theta : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    for (double bond : {0.0, 0.1, 2.0}) {
      const Coefficients co = abcd_from_model({theta, 1.0, 1.0, bond});
      CHECK(co.b == 0.0);
      CHECK(co.d == 0.0);
    }
  }
}

TEST_CASE("model map is affine in lambda and mu") {
  // Three collinear inputs map to collinear outputs.
  const ModelParams p0{0.3, 0.0, 0.0, 0.2}, p1{0.3, 1.0, 2.0, 0.2}, pm{0.3, 0.5, 1.0, 0.2};
  const Coefficients c0 = abcd_from_model(p0), c1 = abcd_from_model(p1), cm = abcd_from_model(pm);
  CHECK(cm.a == doctest::Approx(0.5 * (c0.a + c1.a)));
  CHECK(cm.b == doctest::Approx(0.5 * (c0.b + c1.b)));
  CHECK(cm.c == doctest::Approx(0.5 * (c0.c + c1.c)));
  CHECK(cm.d == doctest::Approx(0.5 * (c0.d + c1.d)));
}

TEST_CASE("bad model inputs throw") {
  CHECK_THROWS_AS(abcd_from_model({1.5, 1.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(abcd_from_model({-0.1, 1.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(abcd_from_model({0.5, 1.0, 1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("regime gate") {
  CHECK(validate_solver_regime({-1.0, 0.0, -1.0, 0.0}).accepted);

  const RegimeReport b = validate_solver_regime({-1.0, 0.1, -1.0, 0.0});
  CHECK_FALSE(b.accepted);
  CHECK(names(b, "b!=0"));
  CHECK(b.violations.size() == 1);

  const RegimeReport a = validate_solver_regime({0.0, 0.0, -1.0, 0.0});
  CHECK_FALSE(a.accepted);
  CHECK(names(a, "a>=0"));

  const RegimeReport all = validate_solver_regime({1.0, 1.0, 1.0, 1.0});
  CHECK(all.violations.size() == 4);
  CHECK(all.summary().find("d!=0") != std::string::npos);
}
