#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mobius/diffgrid.hpp"

using namespace mobius;

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

Grid periodic_grid(int n) {
  Grid g;
  g.u0 = 0;
  g.u1 = 2 * kPi;
  g.v0 = 0;
  g.v1 = 2 * kPi;
  g.nu = g.nv = n;
  g.periodic_u = g.periodic_v = true;
  return g;
}

Grid box_grid(int n) {
  Grid g;
  g.u0 = -1;
  g.u1 = 1;
  g.v0 = -0.5;
  g.v1 = 1.5;
  g.nu = g.nv = n;
  return g;
}

template <class F>
Real max_error(const ScalarField& f, const Grid& g, F&& exact) {
  Real m = 0;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) m = std::max(m, std::abs(f(i, j) - exact(g.u(i), g.v(j))));
  return m;
}

}  // namespace

TEST_CASE("spectral derivative is exact for band-limited data") {
  const Grid g = periodic_grid(32);
  const ScalarField f = sample(g, [](Real u, Real v) { return Complex(std::sin(3 * u) * std::cos(2 * v), 0); });
  const ScalarField fu = d_u(f, g), fv = d_v(f, g);
  CHECK(max_error(fu, g, [](Real u, Real v) { return Complex(3 * std::cos(3 * u) * std::cos(2 * v)); }) < 1e-13);
  CHECK(max_error(fv, g, [](Real u, Real v) { return Complex(-2 * std::sin(3 * u) * std::sin(2 * v)); }) < 1e-13);
}

TEST_CASE("finite differences are exact for polynomials up to degree six") {
  const Grid g = box_grid(20);
  const ScalarField f = sample(g, [](Real u, Real v) { return Complex(std::pow(u, 6) - 2 * u * std::pow(v, 5) + v, 0); });
  const ScalarField fu = d_u(f, g), fv = d_v(f, g);
  CHECK(max_error(fu, g, [](Real u, Real v) { return Complex(6 * std::pow(u, 5) - 2 * std::pow(v, 5)); }) < 1e-10);
  CHECK(max_error(fv, g, [](Real u, Real v) { return Complex(-10 * u * std::pow(v, 4) + 1); }) < 1e-10);
}

TEST_CASE("finite differences converge at sixth order") {
  auto err = [](int n) {
    const Grid g = box_grid(n);
    const ScalarField f = sample(g, [](Real u, Real v) { return Complex(std::exp(u) * std::sin(v), 0); });
    return max_error(d_u(f, g), g, [](Real u, Real v) { return Complex(std::exp(u) * std::sin(v)); });
  };
  const Real ratio = err(40) / err(80);
  // (79/39)^6 ~ 69 for the interior stencil; boundary stencils keep the same order.
  CHECK(ratio > 40);
}

TEST_CASE("fd_weights reproduce known stencils") {
  const std::vector<Real> x{-1, 0, 1};
  const std::vector<Real> w1 = fd_weights(0, x, 1);
  CHECK(w1[0] == doctest::Approx(-0.5));
  CHECK(w1[1] == doctest::Approx(0).epsilon(1e-15));
  CHECK(w1[2] == doctest::Approx(0.5));
  const std::vector<Real> w2 = fd_weights(0, x, 2);
  CHECK(w2[0] == doctest::Approx(1));
  CHECK(w2[1] == doctest::Approx(-2));
  CHECK(w2[2] == doctest::Approx(1));
  Real sum = 0;
  for (Real w : fd_weights(0.3, {0, 1, 2, 3, 4, 5, 6}, 1)) sum += w;
  CHECK(std::abs(sum) < 1e-12);
}

TEST_CASE("d_z of z^2 is 2z and d_zbar of z^2 vanishes") {
  const Grid g = box_grid(24);
  const ScalarField f = sample(g, [](Real u, Real v) { return Complex(u, v) * Complex(u, v); });
  CHECK(max_error(d_z(f, g), g, [](Real u, Real v) { return Real(2) * Complex(u, v); }) < 1e-11);
  CHECK(max_error(d_zbar(f, g), g, [](Real, Real) { return Complex(0); }) < 1e-11);
}

TEST_CASE("d_z of a conjugate is the conjugate of d_zbar, bit for bit") {
  const Grid g = box_grid(18);
  const ScalarField f = sample(g, [](Real u, Real v) { return Complex(std::sin(u) * v, std::cosh(v) - u * u); });
  const ScalarField lhs = d_z(conj(f), g), rhs = conj(d_zbar(f, g));
  for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(lhs[k] == rhs[k]);
}

TEST_CASE("conformal Laplacian of a harmonic function vanishes") {
  const Grid g = box_grid(24);
  const ScalarField f = sample(g, [](Real u, Real v) { return Complex(std::exp(u) * std::cos(v), 0); });
  const RealField omega(g, 0.25);
  const ScalarField lap = laplacian_conformal(f, omega, g);
  Real interior = 0, edge = 0;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i)
      (g.is_interior(i, j, 3) ? interior : edge) = std::max(g.is_interior(i, j, 3) ? interior : edge, std::abs(lap(i, j)));
  CHECK(interior < 1e-6);
  CHECK(edge < 1e-4);
}

TEST_CASE("integrate_density matches exact integrals") {
  const Grid p = periodic_grid(32);
  const RealField one(p, 1);
  const RealField c2 = real_part(sample(p, [](Real u, Real) { return Complex(std::cos(u) * std::cos(u)); }));
  CHECK(integrate_density(c2, one, p) == doctest::Approx(2 * kPi * kPi).epsilon(1e-14));

  const Grid b = box_grid(41);
  const RealField lin = real_part(sample(b, [](Real u, Real v) { return Complex(u + 2 * v); }));
  // Trapezoid rule is exact on bilinear data: area 4, mean of u + 2v is 1.
  CHECK(integrate_density(lin, RealField(b, 1), b) == doctest::Approx(4).epsilon(1e-14));
}

TEST_CASE("integrate_density skips ghost nodes") {
  const Grid core = box_grid(21);
  const Grid pad = core.padded(5);
  CHECK(pad.nu == 31);
  CHECK(pad.core() == core);
  CHECK(pad.hu() == doctest::Approx(core.hu()));
  RealField f(pad, 1);
  for (int j = 0; j < pad.nv; ++j)
    for (int i = 0; i < pad.nu; ++i)
      if (!pad.is_core(i, j)) f(i, j) = 1e6;
  CHECK(integrate_density(f, RealField(pad, 1), pad) == doctest::Approx(4));
}

TEST_CASE("grid validation") {
  Grid g = box_grid(16);
  CHECK_NOTHROW(g.validate());
  g.nu = 15;
  CHECK_THROWS_AS(g.validate(), GeometryError);
  g = box_grid(16);
  g.u1 = g.u0;
  CHECK_THROWS_AS(g.validate(), GeometryError);
}

TEST_CASE("interior margin excludes nodes near non-periodic edges only") {
  Grid g = box_grid(16);
  g.periodic_u = true;
  CHECK(g.is_interior(0, 5, 3));
  CHECK_FALSE(g.is_interior(5, 2, 3));
  CHECK(g.is_interior(5, 3, 3));
}

TEST_CASE("shape mismatch is rejected") {
  const Grid g = box_grid(16);
  const ScalarField f(17, 16);
  CHECK_THROWS_AS(d_u(f, g), GeometryError);
}
