#include "mobius/isoparam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mobius::iso {

namespace {

using CosPoly = TrigPoly::CosPoly;

Real to_real(const Rational& q) {
  // Numerators and denominators here are small; converting each through
  // double and dividing in extended precision keeps full accuracy.
  return static_cast<Real>(q.get_num().get_d()) / static_cast<Real>(q.get_den().get_d());
}

std::string rational_str(const Rational& q) { return q.get_str(); }

/// 1 - c^2, the image of sin^2.
const CosPoly& one_minus_c2() {
  static const CosPoly p(std::vector<RatPoly>{RatPoly(Rational(1)), RatPoly(), RatPoly(Rational(-1))});
  return p;
}

CosPoly cos_times(const CosPoly& p) { return p * CosPoly::monomial(RatPoly(Rational(1)), 1); }

CosPoly map_coeffs(const CosPoly& p, const std::function<RatPoly(const RatPoly&)>& f) {
  std::vector<RatPoly> out;
  for (const RatPoly& c : p.coeffs()) out.push_back(f(c));
  return CosPoly(std::move(out));
}

Real eval_cos_poly(const CosPoly& p, Real K, Real c) {
  Real acc = 0;
  const auto& co = p.coeffs();
  for (auto it = co.rbegin(); it != co.rend(); ++it) acc = acc * c + evaluate(*it, K);
  return acc;
}

CosPoly shift_down(const CosPoly& p) {
  if (p.is_zero()) return p;
  return CosPoly(std::vector<RatPoly>(p.coeffs().begin() + 1, p.coeffs().end()));
}

bool divisible_by_cos(const TrigPoly& t) { return t.a().coeff(0).is_zero() && t.b().coeff(0).is_zero(); }

/// If t = k cos^m with k in Q[K], returns m and sets k; otherwise -1.
int cos_monomial(const TrigPoly& t, RatPoly& k) {
  if (!t.b().is_zero() || t.a().is_zero()) return -1;
  const auto& co = t.a().coeffs();
  for (std::size_t j = 0; j + 1 < co.size(); ++j)
    if (!co[j].is_zero()) return -1;
  k = co.back();
  return static_cast<int>(co.size()) - 1;
}

std::string poly_term(const std::string& coeff, const std::string& factor) {
  if (factor.empty()) return "(" + coeff + ")";
  return "(" + coeff + ")*" + factor;
}

mpz_class integer_sqrt_part(mpz_class n, mpz_class& squarefree) {
  // n = s^2 * squarefree with squarefree having no square factor.
  mpz_class s = 1, r = 1;
  for (mpz_class p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      s *= p;
    }
    if (n % p == 0) {
      n /= p;
      r *= p;
    }
  }
  squarefree = r * n;
  return s;
}

std::vector<mpz_class> divisors(mpz_class n) {
  if (n < 0) n = -n;
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

/// Integer coefficient vector proportional to p.
std::vector<mpz_class> integer_coeffs(const RatPoly& p) {
  mpz_class l = 1;
  for (const Rational& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<mpz_class> out;
  for (const Rational& c : p.coeffs()) {
    Rational scaled = c * Rational(l);
    out.push_back(scaled.get_num());
  }
  return out;
}

bool contains(const std::vector<AlgebraicNumber>& v, const AlgebraicNumber& x) {
  for (const auto& y : v)
    if (y.a == x.a && y.b == x.b && y.d == x.d) return true;
  return false;
}

}  // namespace

RatPoly K_symbol() { return RatPoly::monomial(Rational(1), 1); }

Rational evaluate(const RatPoly& p, const Rational& K) { return p(K); }

Real evaluate(const RatPoly& p, Real K) {
  Real acc = 0;
  const auto& co = p.coeffs();
  for (auto it = co.rbegin(); it != co.rend(); ++it) acc = acc * K + to_real(*it);
  return acc;
}

std::string to_string(const RatPoly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    Rational c = p.coeff(k);
    if (c == 0) continue;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    const bool unit = c == 1 && k > 0;
    if (!unit) out += rational_str(c);
    if (k > 0) out += (unit ? "" : "*") + var + (k > 1 ? "^" + std::to_string(k) : "");
  }
  return out;
}

void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  q = RatPoly();
  r = a;
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const RatPoly t = RatPoly::monomial(r.leading() / b.leading(), r.degree() - b.degree());
    q += t;
    r -= t * b;
  }
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
  RatPoly x = a, y = b;
  while (!y.is_zero()) {
    RatPoly q, r;
    divmod(x, y, q, r);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  const Rational lead = x.leading();
  return x * RatPoly(Rational(1) / lead);
}

TrigPoly TrigPoly::cos() { return {CosPoly::monomial(RatPoly(Rational(1)), 1), CosPoly()}; }
TrigPoly TrigPoly::sin() { return {CosPoly(), CosPoly(RatPoly(Rational(1)))}; }

TrigPoly operator*(const TrigPoly& x, const TrigPoly& y) {
  // (A + B s)(C + D s) = AC + BD (1 - c^2) + (AD + BC) s.
  return {x.a_ * y.a_ + x.b_ * y.b_ * one_minus_c2(), x.a_ * y.b_ + x.b_ * y.a_};
}

TrigPoly TrigPoly::derivative() const {
  // d(A(c)) = -A'(c) s;  d(B(c) s) = -B'(c) s^2 + B(c) c.
  return {cos_times(b_) - b_.derivative() * one_minus_c2(), -a_.derivative()};
}

TrigPoly TrigPoly::substitute_K(const Rational& K) const {
  auto sub = [&](const RatPoly& p) { return RatPoly(evaluate(p, K)); };
  return {map_coeffs(a_, sub), map_coeffs(b_, sub)};
}

Real TrigPoly::eval(Real K, Real psi) const {
  const Real c = std::cos(psi), s = std::sin(psi);
  return eval_cos_poly(a_, K, c) + s * eval_cos_poly(b_, K, c);
}

std::string TrigPoly::str() const {
  std::vector<std::string> terms;
  auto add = [&](const CosPoly& p, const std::string& sfx) {
    for (int j = 0; j <= p.degree(); ++j) {
      if (p.coeff(j).is_zero()) continue;
      std::string f = j == 0 ? "" : (j == 1 ? "cos" : "cos^" + std::to_string(j));
      if (!sfx.empty()) f = f.empty() ? sfx : f + "*" + sfx;
      terms.push_back(poly_term(to_string(p.coeff(j)), f));
    }
  };
  add(a_, "");
  add(b_, "sin");
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t k = 1; k < terms.size(); ++k) out += " + " + terms[k];
  return out;
}

TrigRational::TrigRational(TrigPoly num, TrigPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("TrigRational: zero denominator");
  cancel_cos();
}

void TrigRational::cancel_cos() {
  RatPoly k;
  int m = cos_monomial(den_, k);
  if (m < 0) return;
  if (k.degree() == 0 && k.leading() != 1) {
    const RatPoly inv(Rational(1) / k.leading());
    num_ = num_ * TrigPoly(inv);
    k = RatPoly(Rational(1));
  }
  if (num_.is_zero()) {
    den_ = TrigPoly(RatPoly(Rational(1)));
    return;
  }
  CosPoly a = num_.a(), b = num_.b();
  while (m > 0 && divisible_by_cos(TrigPoly(a, b))) {
    a = shift_down(a);
    b = shift_down(b);
    --m;
  }
  num_ = TrigPoly(a, b);
  den_ = TrigPoly(CosPoly::monomial(k, m), CosPoly());
}

TrigRational operator+(const TrigRational& x, const TrigRational& y) {
  if (x.den_ == y.den_) return {x.num_ + y.num_, x.den_};
  return {x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_};
}

TrigRational operator-(const TrigRational& x, const TrigRational& y) {
  if (x.den_ == y.den_) return {x.num_ - y.num_, x.den_};
  return {x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_};
}

TrigRational operator*(const TrigRational& x, const TrigRational& y) {
  return {x.num_ * y.num_, x.den_ * y.den_};
}

bool operator==(const TrigRational& x, const TrigRational& y) { return x.num_ * y.den_ == y.num_ * x.den_; }

TrigRational TrigRational::derivative() const {
  return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
}

TrigRational TrigRational::substitute_K(const Rational& K) const {
  return {num_.substitute_K(K), den_.substitute_K(K)};
}

Real TrigRational::eval(Real K, Real psi) const { return num_.eval(K, psi) / den_.eval(K, psi); }

IsoData build_FG(Space space) {
  const Rational a = space == Space::S3 ? 1 : 2;
  const RatPoly K = K_symbol();
  const RatPoly Km = K - RatPoly(a);
  // F = 4 K c^2 - 2 (K - a)(1 - c^2) = -2(K - a) + (6K - 2a) c^2.
  const CosPoly Fa(std::vector<RatPoly>{RatPoly(Rational(-2)) * Km, RatPoly(),
                                        RatPoly(Rational(6)) * K - RatPoly(Rational(2) * a)});
  TrigPoly F(Fa, CosPoly());
  // G cos = 2 (K - a) sin.
  TrigRational G(TrigPoly(CosPoly(), CosPoly(RatPoly(Rational(2)) * Km)), TrigPoly::cos());
  return {std::move(F), std::move(G)};
}

TrigRational eisenhart_identity(const TrigPoly& F, const TrigRational& G) {
  const TrigPoly two(RatPoly(Rational(2)));
  const TrigRational Fr(F), Fp(F.derivative()), Fpp(F.derivative().derivative());
  const TrigRational Gp = G.derivative();
  const TrigRational twoR(two);
  const TrigRational twoKF(two * TrigPoly(K_symbol()) * F);
  return twoKF + (twoR * G - Fp) * (G - Fp) + Fr * (twoR * Gp - Fpp);
}

std::vector<RatPoly> Obstruction::in_cos_squared() const {
  for (const RatPoly& p : sin_coeffs)
    if (!p.is_zero()) throw std::logic_error("obstruction has a sin term");
  std::vector<RatPoly> out;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
    if (k % 2 == 1) {
      if (!cos_coeffs[k].is_zero()) throw std::logic_error("obstruction has an odd power of cos");
      continue;
    }
    out.push_back(cos_coeffs[k]);
  }
  return out;
}

Obstruction reduce_expression(const TrigRational& e) {
  RatPoly k;
  const int m = cos_monomial(e.den(), k);
  if (m < 0 || k.degree() != 0)
    throw std::domain_error("reduce_expression: denominator is not a rational multiple of a power of cos");
  Obstruction ob;
  ob.cleared_power = m;
  ob.cos_coeffs = e.num().a().coeffs();
  ob.sin_coeffs = e.num().b().coeffs();

  // Common power of cos shared by both parts of the numerator.
  auto low = [](const std::vector<RatPoly>& v) {
    std::size_t j = 0;
    while (j < v.size() && v[j].is_zero()) ++j;
    return j;
  };
  std::size_t common = 0;
  if (ob.sin_coeffs.empty())
    common = ob.cos_coeffs.empty() ? 0 : low(ob.cos_coeffs);
  else
    common = ob.cos_coeffs.empty() ? low(ob.sin_coeffs) : std::min(low(ob.cos_coeffs), low(ob.sin_coeffs));
  if (common > 0) {
    for (auto* v : {&ob.cos_coeffs, &ob.sin_coeffs})
      if (!v->empty()) v->erase(v->begin(), v->begin() + static_cast<std::ptrdiff_t>(common));
    ob.cleared_power -= static_cast<int>(common);
  }

  // Content normalization over every rational coefficient.
  mpz_class l = 1, g = 0;
  auto each = [&](auto&& f) {
    for (auto* v : {&ob.cos_coeffs, &ob.sin_coeffs})
      for (RatPoly& p : *v)
        for (const Rational& c : p.coeffs()) f(c);
  };
  each([&](const Rational& c) { mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t()); });
  each([&](const Rational& c) {
    const Rational scaled = c * Rational(l);
    const mpz_class n = scaled.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  });
  if (g == 0) return ob;
  Rational scale = Rational(l) / Rational(g);
  const RatPoly* first = nullptr;
  for (auto* v : {&ob.cos_coeffs, &ob.sin_coeffs})
    for (const RatPoly& p : *v)
      if (!first && !p.is_zero()) first = &p;
  if (first->leading() < 0) scale = -scale;
  for (auto* v : {&ob.cos_coeffs, &ob.sin_coeffs})
    for (RatPoly& p : *v) p = p * RatPoly(scale);
  return ob;
}

Obstruction reduce_obstruction(Space space) {
  const IsoData d = build_FG(space);
  return reduce_expression(eisenhart_identity(d.F, d.G));
}

std::string AlgebraicNumber::str() const {
  if (is_rational()) return rational_str(a);
  std::string out = a == 0 ? "" : rational_str(a) + (b < 0 ? " - " : " + ");
  Rational mag = b < 0 && a != 0 ? Rational(-b) : b;
  if (mag == -1)
    out += "-";
  else if (mag != 1)
    out += rational_str(mag) + "*";
  return out + "sqrt(" + rational_str(d) + ")";
}

std::string RootSet::str() const {
  std::string out = "{";
  for (std::size_t k = 0; k < roots.size(); ++k) out += (k ? ", " : "") + roots[k].str();
  for (std::size_t k = 0; k < unsolved.size(); ++k)
    out += (roots.empty() && k == 0 ? "" : ", ") + std::string("roots of ") + to_string(unsolved[k]);
  return out + "}";
}

RootSet roots(const RatPoly& p) {
  RootSet out;
  if (p.degree() <= 0) return out;
  RatPoly rest = p;
  // Zero root.
  if (rest.coeff(0) == 0) {
    out.roots.push_back({Rational(0), Rational(0), Rational(0)});
    while (rest.coeff(0) == 0) rest = RatPoly(std::vector<Rational>(rest.coeffs().begin() + 1, rest.coeffs().end()));
  }
  // Rational root theorem on an integer multiple.
  const std::vector<mpz_class> zc = integer_coeffs(rest);
  for (const mpz_class& num : divisors(zc.front())) {
    for (const mpz_class& den : divisors(zc.back())) {
      for (int sign : {1, -1}) {
        Rational r(mpz_class(num * sign), den);
        r.canonicalize();
        if (rest.degree() < 1) break;
        if (evaluate(rest, r) != 0) continue;
        const AlgebraicNumber root{r, Rational(0), Rational(0)};
        if (!contains(out.roots, root)) out.roots.push_back(root);
        const RatPoly lin(std::vector<Rational>{-r, Rational(1)});
        RatPoly q, rem;
        while (rest.degree() >= 1 && evaluate(rest, r) == 0) {
          divmod(rest, lin, q, rem);
          rest = q;
        }
      }
    }
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const AlgebraicNumber& x, const AlgebraicNumber& y) { return x.a < y.a; });
  if (rest.degree() == 2) {
    const Rational a = rest.coeff(2), b = rest.coeff(1), c = rest.coeff(0);
    const Rational disc = b * b - 4 * a * c;
    // sqrt(p/q) = sqrt(p q) / q, then pull squares out of p q.
    mpz_class pq = disc.get_num() * disc.get_den();
    const bool negative = pq < 0;
    if (negative) pq = -pq;
    mpz_class sf;
    const mpz_class s = integer_sqrt_part(pq, sf);
    const Rational re = -b / (2 * a);
    Rational im(s, disc.get_den());
    im.canonicalize();
    im /= 2 * a;
    const Rational d(negative ? mpz_class(-sf) : sf);
    out.roots.push_back({re, im, d});
    out.roots.push_back({re, -im, d});
  } else if (rest.degree() >= 3) {
    out.unsolved.push_back(rest);
  }
  return out;
}

std::string factored(const RatPoly& p, const std::string& var) {
  if (p.degree() <= 0) return to_string(p, var);
  RatPoly rest = p;
  std::string body;
  for (const AlgebraicNumber& r : roots(p).roots) {
    if (!r.is_rational()) continue;
    const RatPoly lin(std::vector<Rational>{Rational(-r.a.get_num()), Rational(r.a.get_den())});
    for (;;) {
      RatPoly q, rem;
      divmod(rest, lin, q, rem);
      if (!rem.is_zero()) break;
      rest = q;
      body += (body.empty() ? "" : "*") + ("(" + to_string(lin, var) + ")");
    }
  }
  if (rest.degree() > 0) return body.empty() ? to_string(p, var) : body + "*(" + to_string(rest, var) + ")";
  const Rational c = rest.leading();
  if (c == 1) return body;
  if (c == -1) return "-" + body;
  return rational_str(c) + "*" + body;
}

ObstructionVerdict obstruction_verdict(const std::vector<RatPoly>& coeffs) {
  ObstructionVerdict v;
  v.coeffs = coeffs;
  bool any = false;
  for (const RatPoly& c : coeffs) {
    v.root_sets.push_back(roots(c));
    if (c.is_zero()) continue;
    v.common = any ? gcd(v.common, c) : gcd(c, RatPoly());
    any = true;
  }
  if (!any) return v;
  v.intersection = roots(v.common);
  bool real_root = false;
  for (const auto& r : v.intersection.roots) real_root = real_root || r.is_real();
  // An unsolved factor of odd degree always has a real root; an even one is
  // not decided here and counts against the verdict.
  v.no_admissible_K = !real_root && v.intersection.unsolved.empty();
  return v;
}

std::string ObstructionVerdict::str() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    out << "c" << k << " = " << to_string(coeffs[k]) << "\n";
    out << "roots(c" << k << ") = " << root_sets[k].str() << "\n";
  }
  out << "common roots = " << intersection.str() << "\n";
  out << (no_admissible_K ? "no admissible constant K" : "an admissible constant K exists") << "\n";
  return out.str();
}

NumericCheck identity_numeric_check(const NumericIsoData& data, Real K, const std::vector<Real>& samples) {
  constexpr Real h = 1e-5;
  auto d1 = [&](const std::function<Real(Real)>& f, Real x) { return (f(x + h) - f(x - h)) / (2 * h); };
  auto d2 = [&](const std::function<Real(Real)>& f, Real x) { return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h); };
  NumericCheck out;
  for (Real psi : samples) {
    const Real F = data.F(psi);
    if (!(F > 0)) {
      std::ostringstream w;
      w << "skipped psi = " << static_cast<double>(psi) << ": F = " << static_cast<double>(F) << " <= 0";
      out.warnings.push_back(w.str());
      continue;
    }
    const Real Fp = data.dF ? data.dF(psi) : d1(data.F, psi);
    const Real Fpp = data.d2F ? data.d2F(psi) : d2(data.F, psi);
    const Real G = data.G(psi);
    const Real Gp = data.dG ? data.dG(psi) : d1(data.G, psi);
    const Real res = 2 * K * F + (2 * G - Fp) * (G - Fp) + F * (2 * Gp - Fpp);
    out.max_residual = std::max(out.max_residual, std::abs(res));
    ++out.used;
  }
  return out;
}

}  // namespace mobius::iso
