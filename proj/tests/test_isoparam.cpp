#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mobius/isoparam.hpp"

using namespace mobius;
using namespace mobius::iso;

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

RatPoly K() { return K_symbol(); }
RatPoly lin(long a, long b) { return RatPoly(Rational(a)) * K() + RatPoly(Rational(b)); }
RatPoly C(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return RatPoly(q);
}

/// Eisenhart expression for F = 4(K cos^2 - (K - a)/2 sin^2), G = 2(K - a) tan,
/// with derivatives written out by hand.
Real eisenhart_by_hand(Real a, Real k, Real psi) {
  const Real c = std::cos(psi), s = std::sin(psi);
  const Real F = 4 * k * c * c - 2 * (k - a) * s * s;
  const Real dF = -(12 * k - 4 * a) * s * c;
  const Real d2F = -(12 * k - 4 * a) * (c * c - s * s);
  const Real G = 2 * (k - a) * s / c;
  const Real dG = 2 * (k - a) / (c * c);
  return 2 * k * F + (2 * G - dF) * (G - dF) + F * (2 * dG - d2F);
}

/// Sum of c_k(K) cos^k psi.
Real eval_cos_poly(const std::vector<RatPoly>& coeffs, Real k, Real psi) {
  Real acc = 0, p = 1;
  for (const RatPoly& q : coeffs) {
    acc += evaluate(q, k) * p;
    p *= std::cos(psi);
  }
  return acc;
}

TrigPoly random_trig(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-5, 5);
  auto rp = [&] {
    Rational q(d(rng), 1 + std::abs(d(rng)));
    q.canonicalize();
    return RatPoly(std::vector<Rational>{q, Rational(d(rng))});
  };
  TrigPoly::CosPoly a(std::vector<RatPoly>{rp(), rp(), rp()}), b(std::vector<RatPoly>{rp(), rp()});
  return {a, b};
}

}  // namespace

TEST_CASE("polynomials in K") {
  const RatPoly p = lin(27, -8) * lin(1, -1);
  CHECK(to_string(p) == "27*K^2 - 35*K + 8");
  CHECK(evaluate(p, Rational(1)) == 0);
  CHECK(evaluate(p, Rational(8, 27)) == 0);
  CHECK(evaluate(p, Real(2)) == doctest::Approx(46));
  CHECK(factored(-(lin(3, -1) * lin(3, -8))) == "-(3*K - 1)*(3*K - 8)");
  RatPoly q, r;
  divmod(p, lin(1, -1), q, r);
  CHECK(q == lin(27, -8));
  CHECK(r.is_zero());
  CHECK(gcd(p, lin(2, -2) * lin(1, 5)) == lin(1, -1));
  CHECK_THROWS(divmod(p, RatPoly(), q, r));
}

TEST_CASE("build_FG values") {
  const IsoData s3 = build_FG(Space::S3);
  // psi = 0: F = 4K.
  CHECK(s3.F.substitute_K(Rational(0)).eval(0, 0) == 0);
  CHECK(s3.F.eval(Real(0.7), 0) == doctest::Approx(2.8));
  // psi = pi/2: F = -2(K - 1).
  const TrigPoly F_half = s3.F.substitute_K(Rational(5));
  CHECK(F_half.eval(5, kPi / 2) == doctest::Approx(-8));
  CHECK(s3.F.eval(Real(-0.5), kPi / 2) == doctest::Approx(3));

  const IsoData s4 = build_FG(Space::S4);
  // G cos = 2(K - 2) sin.
  CHECK(s4.G * TrigRational(TrigPoly::cos()) == TrigRational(TrigPoly(TrigPoly::CosPoly(), TrigPoly::CosPoly(lin(2, -4)))));
  CHECK(s4.G.eval(3, Real(0.4)) == doctest::Approx(2 * std::tan(0.4)));
}

TEST_CASE("Eisenhart identity holds exactly for the plane and the round sphere") {
  const TrigPoly one(C(1));
  const TrigRational plane = eisenhart_identity(one, TrigRational());
  CHECK(plane.substitute_K(Rational(0)).is_zero());
  CHECK_FALSE(plane.substitute_K(Rational(1)).is_zero());

  const TrigRational cot(TrigPoly::cos(), TrigPoly::sin());
  const TrigRational sphere = eisenhart_identity(one, cot);
  CHECK(sphere.substitute_K(Rational(1)).is_zero());
  CHECK_FALSE(sphere.substitute_K(Rational(2)).is_zero());
}

TEST_CASE("numeric identity checker") {
  NumericIsoData plane;
  plane.F = [](Real) { return Real(1); };
  plane.G = [](Real) { return Real(0); };
  CHECK(identity_numeric_check(plane, 0, {0.1, 0.5, 2.0}).max_residual == 0);

  NumericIsoData sphere;
  sphere.F = [](Real) { return Real(1); };
  sphere.dF = sphere.d2F = [](Real) { return Real(0); };
  sphere.G = [](Real p) { return std::cos(p) / std::sin(p); };
  sphere.dG = [](Real p) { return -1 / (std::sin(p) * std::sin(p)); };
  const NumericCheck sc = identity_numeric_check(sphere, 1, {0.3, 0.7, 1.2});
  CHECK(sc.used == 3);
  CHECK(sc.max_residual < 1e-12);

  NumericIsoData hyper;
  hyper.F = [](Real) { return Real(1); };
  hyper.dF = hyper.d2F = [](Real) { return Real(0); };
  hyper.G = [](Real p) { return std::cosh(p) / std::sinh(p); };
  hyper.dG = [](Real p) { return -1 / (std::sinh(p) * std::sinh(p)); };
  CHECK(identity_numeric_check(hyper, -1, {0.3, 0.7, 1.2, 2.5}).max_residual < 1e-12);

  // Same data with derivatives left to central differences.
  NumericIsoData fd;
  fd.F = hyper.F;
  fd.G = hyper.G;
  CHECK(identity_numeric_check(fd, -1, {0.3, 0.7, 1.2}).max_residual < 1e-6);
}

TEST_CASE("numeric checker skips samples with F <= 0") {
  NumericIsoData d;
  d.F = [](Real p) { return p - 1; };
  d.G = [](Real) { return Real(0); };
  const NumericCheck c = identity_numeric_check(d, 0, {0.5, 1.0, 2.0});
  CHECK(c.used == 1);
  CHECK(c.warnings.size() == 2);
}

TEST_CASE("S3 obstruction is a rational multiple of the published polynomial") {
  const Obstruction ob = reduce_obstruction(Space::S3);
  CHECK(ob.cleared_power == 0);
  const std::vector<RatPoly> c = ob.in_cos_squared();
  REQUIRE(c.size() == 2);
  const RatPoly paper0 = C(4) * lin(27, -8) * lin(1, -1);
  const RatPoly paper1 = -(C(4) * lin(3, -1) * lin(3, -8));
  const Rational lambda = paper0.leading() / c[0].leading();
  CHECK(lambda != 0);
  CHECK(c[0] * RatPoly(lambda) == paper0);
  CHECK(c[1] * RatPoly(lambda) == paper1);
  CHECK(lambda == 4);
  // K = 1: constant term vanishes, cos^2 coefficient is 40 in the published scaling.
  CHECK(evaluate(paper1, Rational(1)) == 40);
}

TEST_CASE("S3 root sets and verdict") {
  const ObstructionVerdict v = obstruction_verdict(reduce_obstruction(Space::S3).in_cos_squared());
  REQUIRE(v.root_sets.size() == 2);
  CHECK(v.root_sets[0].str() == "{8/27, 1}");
  CHECK(v.root_sets[1].str() == "{1/3, 8/3}");
  CHECK(v.intersection.roots.empty());
  CHECK(v.no_admissible_K);
}

TEST_CASE("a shared root defeats the verdict") {
  const ObstructionVerdict v = obstruction_verdict({lin(1, -2), lin(1, -2)});
  CHECK_FALSE(v.no_admissible_K);
  REQUIRE(v.intersection.roots.size() == 1);
  CHECK(v.intersection.roots[0].a == 2);
  CHECK_FALSE(obstruction_verdict({RatPoly(), RatPoly()}).no_admissible_K);
  CHECK(obstruction_verdict({C(3), lin(1, 1)}).no_admissible_K);
}

TEST_CASE("quadratic roots are exact") {
  const RatPoly two = K() * K() - C(2);
  const RootSet r = roots(two);
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0].d == 2);
  CHECK_FALSE(r.roots[0].is_rational());
  CHECK(r.roots[0].is_real());
  CHECK_FALSE(obstruction_verdict({two, two * lin(1, 7)}).no_admissible_K);
  const RatPoly complex_pair = K() * K() + C(1);
  CHECK_FALSE(roots(complex_pair).roots[0].is_real());
  CHECK(obstruction_verdict({complex_pair, complex_pair * lin(1, 7)}).no_admissible_K);
  CHECK(roots(lin(2, 0) * lin(1, 0) * lin(3, -1)).str() == "{0, 1/3}");
}

TEST_CASE("S4 obstruction has no admissible K") {
  const Obstruction ob = reduce_obstruction(Space::S4);
  const std::vector<RatPoly> c = ob.in_cos_squared();
  REQUIRE(c.size() == 2);
  CHECK(c[0] == lin(27, -16) * lin(1, -2));
  CHECK(c[1] == -(lin(3, -2) * lin(3, -16)));
  const ObstructionVerdict v = obstruction_verdict(c);
  CHECK(v.no_admissible_K);
  CHECK(v.common == C(1));
}

TEST_CASE("symbolic and hand-written Eisenhart expressions agree") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> Kd(-3, 3), pd(-1.4, 1.4);
  for (Space sp : {Space::S3, Space::S4}) {
    const Real a = sp == Space::S3 ? 1 : 2;
    const IsoData d = build_FG(sp);
    const TrigRational e = eisenhart_identity(d.F, d.G);
    const Obstruction ob = reduce_obstruction(sp);
    Real ratio = 0;
    for (int n = 0; n < 50; ++n) {
      const Real k = Kd(rng), psi = pd(rng);
      const Real by_hand = eisenhart_by_hand(a, k, psi);
      CHECK(std::abs(e.eval(k, psi) - by_hand) <= 1e-10 * std::max(Real(1), std::abs(by_hand)));
      // The reduced form is a fixed rational multiple of the expression.
      const Real red = eval_cos_poly(ob.cos_coeffs, k, psi) * std::pow(std::cos(psi), ob.cleared_power);
      if (std::abs(red) > 1e-3) {
        const Real q = by_hand / red;
        if (ratio == 0) ratio = q;
        CHECK(std::abs(q - ratio) <= 1e-10 * std::abs(ratio));
      }
    }
    CHECK(ratio != 0);
  }
}

TEST_CASE("reduction is unique under extra cos factors and rational scaling") {
  for (Space sp : {Space::S3, Space::S4}) {
    const IsoData d = build_FG(sp);
    const TrigRational e = eisenhart_identity(d.F, d.G);
    const Obstruction base = reduce_expression(e);
    const TrigPoly c2 = TrigPoly::cos() * TrigPoly::cos();
    const TrigRational scaled = e * TrigRational(TrigPoly(C(-3, 7)) * c2);
    const Obstruction again = reduce_expression(scaled);
    CHECK(again.cos_coeffs == base.cos_coeffs);
    CHECK(again.cleared_power == base.cleared_power - 2);
    const TrigRational over = e * TrigRational(TrigPoly(C(5)), c2 * TrigPoly::cos());
    CHECK(reduce_expression(over).cos_coeffs == base.cos_coeffs);
  }
}

TEST_CASE("TrigPoly ring axioms and Leibniz rule") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 25; ++n) {
    const TrigPoly a = random_trig(rng), b = random_trig(rng), c = random_trig(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
    const Real k = 0.37L, psi = 0.91L;
    CHECK((a * b).eval(k, psi) == doctest::Approx(a.eval(k, psi) * b.eval(k, psi)).epsilon(1e-14));
  }
  const TrigPoly s = TrigPoly::sin(), co = TrigPoly::cos();
  CHECK(s * s + co * co == TrigPoly(C(1)));
  CHECK(s.derivative() == co);
  CHECK(co.derivative() == -s);
}

TEST_CASE("TrigRational arithmetic") {
  const TrigRational tan(TrigPoly::sin(), TrigPoly::cos());
  const TrigRational sec2(TrigPoly(C(1)), TrigPoly::cos() * TrigPoly::cos());
  CHECK(tan.derivative() == sec2);
  CHECK(tan * tan + TrigRational(TrigPoly(C(1))) == sec2);
  CHECK(tan - tan == TrigRational());
  CHECK(tan.eval(0, 0.3) == doctest::Approx(std::tan(0.3)));
}
