#pragma once
/**
 * @file isoparam.hpp
 * @brief Exact algebra for isoparametric functions on a surface of constant
 * curvature K: polynomials in K over Q, trigonometric polynomials in psi
 * with such coefficients, the Eisenhart identity
 *   2 K F + (2G - F')(G - F') + F (2G' - F'') = 0,
 * the obstruction polynomial obtained from it for Willmore surfaces of
 * constant Moebius curvature, and its common-root analysis.
 *
 * Everything is exact (GMP rationals) except identity_numeric_check and the
 * `eval` helpers, which exist for cross-checking against floating point.
 */

#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mobius/types.hpp"

namespace mobius::iso {

using Rational = mpq_class;

/// Univariate polynomial with coefficients in R, stored low degree first and
/// kept without trailing zero coefficients (the zero polynomial is empty).
template <class R>
class Poly {
 public:
  Poly() = default;
  Poly(R c) : c_{std::move(c)} { trim(); }
  explicit Poly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// The monomial c x^k.
  static Poly monomial(R c, int k) {
    std::vector<R> v(static_cast<std::size_t>(k) + 1, R(0));
    v.back() = std::move(c);
    return Poly(std::move(v));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<R>& coeffs() const { return c_; }
  /// Coefficient of x^k (zero beyond the degree).
  R coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : R(0); }
  const R& leading() const { return c_.back(); }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) { return Poly() - a; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> out(a.c_.size() + b.c_.size() - 1, R(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(out));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Formal derivative d/dx.
  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<R> out(c_.size() - 1, R(0));
    for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * R(static_cast<long>(k));
    return Poly(std::move(out));
  }

  /// Horner evaluation at x of any type the coefficients multiply into.
  template <class X>
  X operator()(const X& x) const {
    X acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == R(0)) c_.pop_back();
  }
  std::vector<R> c_;
};

/// Polynomial in the curvature symbol K with rational coefficients.
using RatPoly = Poly<Rational>;

/// The symbol K itself.
RatPoly K_symbol();
/// K -> value.
Rational evaluate(const RatPoly& p, const Rational& K);
Real evaluate(const RatPoly& p, Real K);
/// Human-readable form, e.g. "27*K^2 - 35*K + 8".
std::string to_string(const RatPoly& p, const std::string& var = "K");

/// Product of integer linear factors over the rational roots times what is
/// left, e.g. "-(3*K - 1)*(3*K - 8)".
std::string factored(const RatPoly& p, const std::string& var = "K");

/// Exact long division (a = q b + r, deg r < deg b). Throws on b = 0.
void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r);
/// Monic greatest common divisor (zero iff both inputs are zero).
RatPoly gcd(const RatPoly& a, const RatPoly& b);

/// A + B sin(psi) with A, B polynomials in c = cos(psi) over RatPoly. Every
/// element of the ring generated by cos and sin has exactly one such form,
/// because sin^2 is rewritten as 1 - cos^2.
class TrigPoly {
 public:
  using CosPoly = Poly<RatPoly>;

  TrigPoly() = default;
  TrigPoly(RatPoly constant) : a_(std::move(constant)) {}
  TrigPoly(CosPoly a, CosPoly b) : a_(std::move(a)), b_(std::move(b)) {}

  static TrigPoly cos();
  static TrigPoly sin();

  /// Part free of sin, and the coefficient of sin.
  const CosPoly& a() const { return a_; }
  const CosPoly& b() const { return b_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  friend TrigPoly operator+(const TrigPoly& x, const TrigPoly& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
  friend TrigPoly operator-(const TrigPoly& x, const TrigPoly& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
  friend TrigPoly operator-(const TrigPoly& x) { return {-x.a_, -x.b_}; }
  friend TrigPoly operator*(const TrigPoly& x, const TrigPoly& y);
  friend bool operator==(const TrigPoly& x, const TrigPoly& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

  /// d/dpsi, with cos' = -sin and sin' = cos.
  TrigPoly derivative() const;
  /// Replaces the symbol K by a rational value.
  TrigPoly substitute_K(const Rational& K) const;
  Real eval(Real K, Real psi) const;
  std::string str() const;

 private:
  CosPoly a_, b_;
};

/// num / den; den is never the zero polynomial.
class TrigRational {
 public:
  TrigRational(TrigPoly num = {}, TrigPoly den = TrigPoly(RatPoly(Rational(1))));

  const TrigPoly& num() const { return num_; }
  const TrigPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  friend TrigRational operator+(const TrigRational& x, const TrigRational& y);
  friend TrigRational operator-(const TrigRational& x, const TrigRational& y);
  friend TrigRational operator*(const TrigRational& x, const TrigRational& y);
  /// Equality by cross multiplication.
  friend bool operator==(const TrigRational& x, const TrigRational& y);

  TrigRational derivative() const;
  TrigRational substitute_K(const Rational& K) const;
  Real eval(Real K, Real psi) const;

 private:
  /// Cancels common powers of cos when the denominator is a monomial in cos.
  void cancel_cos();
  TrigPoly num_, den_;
};

enum class Space { S3, S4 };

struct IsoData {
  TrigPoly F;
  TrigRational G;
};

/// F = |grad psi|^2 and G = Laplacian psi for psi = arg P on a Willmore
/// surface of constant curvature K; with a = 1 (S^3) or 2 (S^4):
/// G = 2 (K - a) tan psi, F = 4 (K cos^2 psi - (K - a)/2 sin^2 psi).
IsoData build_FG(Space space);

/// 2 K F + (2G - F')(G - F') + F (2G' - F''), with K the symbol.
TrigRational eisenhart_identity(const TrigPoly& F, const TrigRational& G);

struct Obstruction {
  /// coeffs[k] multiplies cos^k psi; content-normalized (integer
  /// coefficients, gcd 1, positive leading coefficient in K of the first
  /// nonzero entry).
  std::vector<RatPoly> cos_coeffs;
  /// Coefficients of sin(psi) cos^k psi; empty for the obstructions here.
  std::vector<RatPoly> sin_coeffs;
  /// Power of cos the expression was multiplied by (negative when a common
  /// cos factor of the numerator was divided out).
  int cleared_power = 0;

  /// cos_coeffs in powers of cos^2 (throws if an odd power or a sin term survives).
  std::vector<RatPoly> in_cos_squared() const;
};

/// Clears the (monomial) cos denominator with the least power, drops common
/// factors of cos, and normalizes by content.
Obstruction reduce_expression(const TrigRational& e);
Obstruction reduce_obstruction(Space space);

/// A root a + b sqrt(d) of a polynomial over Q (b = 0 for rational roots;
/// d < 0 gives a complex root).
struct AlgebraicNumber {
  Rational a, b, d;
  bool is_rational() const { return b == 0; }
  bool is_real() const { return b == 0 || d >= 0; }
  std::string str() const;
};

struct RootSet {
  std::vector<AlgebraicNumber> roots;
  /// Factors of degree >= 3 without rational roots, left unsolved.
  std::vector<RatPoly> unsolved;
  std::string str() const;
};

/// Exact roots with multiplicity removed: rational roots by the rational
/// root theorem, then the quadratic formula on a remaining quadratic.
RootSet roots(const RatPoly& p);

struct ObstructionVerdict {
  std::vector<RatPoly> coeffs;
  std::vector<RootSet> root_sets;
  /// gcd of the nonzero coefficients; its roots are the common roots.
  RatPoly common;
  RootSet intersection;
  /// True when no real K annihilates every coefficient.
  bool no_admissible_K = false;
  std::string str() const;
};

/// Root analysis of a coefficient list. An all-zero list is satisfied by
/// every K and so yields no_admissible_K = false.
ObstructionVerdict obstruction_verdict(const std::vector<RatPoly>& coeffs);

/// Caller-supplied F and G with optional derivatives; missing derivatives
/// are taken by central differences with step 1e-5.
struct NumericIsoData {
  std::function<Real(Real)> F, dF, d2F, G, dG;
};

struct NumericCheck {
  Real max_residual = 0;
  std::size_t used = 0;
  std::vector<std::string> warnings;
};

/// Evaluates the Eisenhart expression at each sample; samples with F <= 0
/// are skipped with a warning.
NumericCheck identity_numeric_check(const NumericIsoData& data, Real K, const std::vector<Real>& samples);

}  // namespace mobius::iso
