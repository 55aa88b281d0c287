#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bwave/grid.hpp"
#include "bwave/sampling.hpp"
#include "support.hpp"

using namespace bwave;
using std::numbers::pi;

TEST_CASE("grid layout") {
  const Grid g(16, 8.0);
  CHECK(g.x(0) == -4.0);
  CHECK(g.x(g.center()) == 0.0);
  CHECK(g.spacing() == 0.5);
  CHECK(g.wavenumber(1) == doctest::Approx(2 * pi / 8.0));
  CHECK_THROWS(Grid(8, 1.0));
  CHECK_THROWS(Grid(7, 1.0));
  CHECK_THROWS(Grid(16, 0.0));
  CHECK_THROWS(Grid(16, -1.0));
}

TEST_CASE("fields reject non-finite samples") {
  const Grid g(16, 1.0);
  std::vector<double> s(16, 0.0);
  s[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(Field(g, s));
  CHECK_THROWS(Field(g, std::vector<double>(15, 0.0)));
}

TEST_CASE("derivative of a resolved mode") {
  const double L = 10.0;
  const Grid g(64, L);
  const Field u = Field::from_function(g, [&](double x) { return std::sin(2 * pi * x / L); });
  const Field du = derivative(u, 1);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    err = std::max(err, std::abs(du[j] - 2 * pi / L * std::cos(2 * pi * g.x(j) / L)));
  }
  CHECK(err < 1e-13);

  const Field d3 = derivative(u, 3);
  const double k = 2 * pi / L;
  CHECK(std::abs(d3[5] + k * k * k * std::cos(k * g.x(5))) < 1e-12);
}

TEST_CASE("derivative of a constant vanishes") {
  const Grid g(32, 3.0);
  const Field u = Field::from_function(g, [](double) { return 2.5; });
  CHECK(derivative(u, 1).max_abs() < 1e-14);
  CHECK(derivative(u, 2).max_abs() < 1e-14);
}

TEST_CASE("second derivative against the three-point stencil") {
  // Stencil error is O(dx^2): halving dx cuts it by about 4.
  auto stencil_error = [](std::size_t n) {
    const Grid g(n, 40.0);
    Rng rng(7);
    const Field u = random_bump_field(g, rng);
    const Field d2 = derivative(u, 2);
    const double h = g.spacing();
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double fd = (u[(j + 1) % n] - 2 * u[j] + u[(j + n - 1) % n]) / (h * h);
      err = std::max(err, std::abs(fd - d2[j]));
    }
    return err;
  };
  const double e1 = stencil_error(256), e2 = stencil_error(512);
  CHECK(e1 < 1e-1);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("derivative order outside 1..3 throws") {
  const Field u(Grid(16, 1.0));
  CHECK_THROWS_AS(derivative(u, 0), std::invalid_argument);
  CHECK_THROWS_AS(derivative(u, 4), std::invalid_argument);
}

TEST_CASE("quadrature of constants") {
  const Grid g(32, 10.0);
  const Field one = Field::from_function(g, [](double) { return 1.0; });
  CHECK(integral(one) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(l2_norm_sq(one) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(lp_norm(one, std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("Gaussian L2 norm against the closed form") {
  const double amp = 1.7, sigma = 1.3;
  const Grid g(512, 40.0);
  const Field u =
      Field::from_function(g, [&](double x) { return amp * std::exp(-x * x / (sigma * sigma)); });
  const double exact = std::sqrt(pi / 2) * sigma * amp * amp;
  CHECK(test::rel(l2_norm_sq(u), exact) < 1e-10);
  // L3 norm: int |u|^3 = amp^3 sigma sqrt(pi/3).
  CHECK(test::rel(std::pow(lp_norm(u, 3.0), 3.0), std::pow(amp, 3) * sigma * std::sqrt(pi / 3)) <
        1e-10);
}

TEST_CASE("Parseval and exact Dirichlet pairing") {
  const Grid g(256, 30.0);
  Rng rng(11);
  const Field u = random_bump_field(g, rng);
  CHECK(test::rel(spectral_l2_norm_sq(u), l2_norm_sq(u)) < 1e-13);
  CHECK(test::rel(dirichlet_energy(u), -inner(u, derivative(u, 2))) < 1e-12);
  CHECK(std::abs(integral(derivative(u, 1))) < 1e-13);
}

TEST_CASE("shift") {
  const double L = 8.0;
  const Grid g(64, L);
  const Field u = Field::from_function(g, [&](double x) { return std::sin(2 * pi * x / L); });
  const Field s0 = shift(u, 0.0), sL = shift(u, L), sq = shift(u, L / 4);
  double e0 = 0, eL = 0, eq = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    e0 = std::max(e0, std::abs(s0[j] - u[j]));
    eL = std::max(eL, std::abs(sL[j] - u[j]));
    eq = std::max(eq, std::abs(sq[j] - std::sin(2 * pi * (g.x(j) - L / 4) / L)));
  }
  CHECK(e0 < 1e-15);
  CHECK(eL < 1e-13);
  CHECK(eq < 1e-14);
}

TEST_CASE("shift preserves Lp norms of a band-limited field") {
  const Grid g(256, 30.0);
  Rng rng(3);
  const Field u = random_bump_field(g, rng);
  const Field s = shift(u, 3.0 * g.spacing());
  for (double p : {2.0, 3.0, 4.0}) CHECK(test::rel(lp_norm(s, p), lp_norm(u, p)) < 1e-12);
}

TEST_CASE("resample") {
  const double L = 6.0;
  const Grid g(64, L);
  const Field u = Field::from_function(g, [&](double x) { return std::cos(2 * pi * x / L); });

  const Field same = resample(u, g, 1.0);
  double e = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) e = std::max(e, std::abs(same[j] - u[j]));
  CHECK(e < 1e-14);

  // Stretching by 2 onto a grid twice as long samples cos(2 pi x / (2L)).
  const Grid wide(128, 2 * L);
  const Field v = resample(u, wide, 2.0);
  e = 0.0;
  for (std::size_t j = 0; j < wide.size(); ++j) {
    e = std::max(e, std::abs(v[j] - std::cos(2 * pi * wide.x(j) / (2 * L))));
  }
  CHECK(e < 1e-10);

  CHECK(resample(Field(g), wide, 2.0).max_abs() == 0.0);
  CHECK_THROWS_AS(resample(u, g, 0.0), std::invalid_argument);
  // A field that does not vanish at the edge cannot be read outside the domain.
  CHECK_THROWS_AS(resample(u, wide, 0.5), std::domain_error);
}
