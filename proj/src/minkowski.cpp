#include "mobius/minkowski.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mobius {

namespace {

template <class T>
T dot_impl(const BasicLorentzVec<T>& a, const BasicLorentzVec<T>& b) {
  if (a.dim() != b.dim()) throw GeometryError("lorentz_dot: dimension mismatch");
  T acc = -a[0] * b[0];
  for (int i = 1; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class T>
Real norm_impl(const BasicLorentzVec<T>& a) {
  Real s = 0;
  for (int i = 0; i < a.dim(); ++i) s += std::norm(a[i]);
  return std::sqrt(s);
}

}  // namespace

Real lorentz_dot(const LorentzVec& a, const LorentzVec& b) { return dot_impl(a, b); }
Complex lorentz_dot(const ComplexLorentzVec& a, const ComplexLorentzVec& b) { return dot_impl(a, b); }

ComplexLorentzVec conj(const ComplexLorentzVec& a) {
  ComplexLorentzVec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = std::conj(a[i]);
  return r;
}

LorentzVec real_part(const ComplexLorentzVec& a) {
  LorentzVec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i].real();
  return r;
}

LorentzVec imag_part(const ComplexLorentzVec& a) {
  LorentzVec r(a.dim());
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i].imag();
  return r;
}

ComplexLorentzVec complexify(const LorentzVec& a) { return ComplexLorentzVec(a); }

Real euclid_norm(const LorentzVec& a) { return norm_impl(a); }
Real euclid_norm(const ComplexLorentzVec& a) { return norm_impl(a); }

std::vector<Real> project_to_sphere(const LorentzVec& y) {
  const Real scale = [&] {
    Real s = 0;
    for (int i = 0; i < y.dim(); ++i) s += y[i] * y[i];
    return s;
  }();
  if (std::abs(lorentz_dot(y, y)) >= 1e-9 * scale) throw GeometryError("project_to_sphere: vector is not null");
  if (std::abs(y[0]) <= 1e-12 * std::sqrt(scale)) throw GeometryError("point at infinity of affine chart");
  std::vector<Real> x(static_cast<std::size_t>(y.dim() - 1));
  for (int i = 1; i < y.dim(); ++i) x[i - 1] = y[i] / y[0];
  return x;
}

LorentzVec lift_point(std::span<const Real> x) {
  LorentzVec y(static_cast<int>(x.size()) + 1);
  y[0] = 1;
  for (std::size_t i = 0; i < x.size(); ++i) y[static_cast<int>(i) + 1] = x[i];
  return y;
}

LorentzTransform::LorentzTransform(int dim, std::span<const Real> row_major) : dim_(dim) {
  if (dim < 2 || dim > kMaxLorentzDim || row_major.size() != static_cast<std::size_t>(dim * dim))
    throw GeometryError("LorentzTransform: bad matrix shape");
  for (int i = 0; i < dim * dim; ++i) m_[i] = row_major[i];
  if (form_defect() > 1e-12) throw GeometryError("LorentzTransform: matrix does not preserve the Minkowski form");
  if (m_[0] <= 0) throw GeometryError("LorentzTransform: not orthochronous");
}

LorentzTransform LorentzTransform::identity(int dim) {
  std::vector<Real> m(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) m[i * dim + i] = 1;
  return LorentzTransform(dim, m);
}

LorentzVec LorentzTransform::apply(const LorentzVec& v) const {
  if (v.dim() != dim_) throw GeometryError("LorentzTransform::apply: dimension mismatch");
  LorentzVec r(dim_);
  for (int i = 0; i < dim_; ++i) {
    Real acc = 0;
    for (int j = 0; j < dim_; ++j) acc += m_[i * dim_ + j] * v[j];
    r[i] = acc;
  }
  return r;
}

ComplexLorentzVec LorentzTransform::apply(const ComplexLorentzVec& v) const {
  if (v.dim() != dim_) throw GeometryError("LorentzTransform::apply: dimension mismatch");
  ComplexLorentzVec r(dim_);
  for (int i = 0; i < dim_; ++i) {
    Complex acc = 0;
    for (int j = 0; j < dim_; ++j) acc += m_[i * dim_ + j] * v[j];
    r[i] = acc;
  }
  return r;
}

LorentzTransform LorentzTransform::compose(const LorentzTransform& right) const {
  if (right.dim_ != dim_) throw GeometryError("LorentzTransform::compose: dimension mismatch");
  LorentzTransform out;
  out.dim_ = dim_;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Real acc = 0;
      for (int k = 0; k < dim_; ++k) acc += m_[i * dim_ + k] * right.m_[k * dim_ + j];
      out.m_[i * dim_ + j] = acc;
    }
  return out;
}

Real LorentzTransform::form_defect() const {
  Real worst = 0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      Real acc = -m_[0 * dim_ + a] * m_[0 * dim_ + b];
      for (int k = 1; k < dim_; ++k) acc += m_[k * dim_ + a] * m_[k * dim_ + b];
      const Real eta = (a != b) ? 0.0 : (a == 0 ? -1.0 : 1.0);
      worst = std::max(worst, std::abs(acc - eta));
    }
  return worst;
}

namespace {

// Row-major (dim x dim) matrices; the factors are built exactly orthogonal /
// hyperbolic and multiplied without renormalization.
using Mat = std::vector<Real>;

Mat identity_mat(int dim) {
  Mat m(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) m[i * dim + i] = 1;
  return m;
}

Mat multiply(const Mat& a, const Mat& b, int dim) {
  Mat r(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j < dim; ++j) r[i * dim + j] += a[i * dim + k] * b[k * dim + j];
  return r;
}

Mat random_rotation(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<Real> angle(-std::numbers::pi_v<Real>, std::numbers::pi_v<Real>);
  Mat m = identity_mat(dim);
  for (int p = 1; p < dim; ++p)
    for (int q = p + 1; q < dim; ++q) {
      Mat g = identity_mat(dim);
      const Real t = angle(rng);
      g[p * dim + p] = std::cos(t);
      g[p * dim + q] = -std::sin(t);
      g[q * dim + p] = std::sin(t);
      g[q * dim + q] = std::cos(t);
      m = multiply(g, m, dim);
    }
  return m;
}

}  // namespace

LorentzTransform random_lorentz(std::uint64_t seed, int n) {
  if (n != 3 && n != 4) throw GeometryError("random_lorentz: n must be 3 or 4");
  const int dim = n + 2;
  std::mt19937_64 rng(seed);
  const Mat r1 = random_rotation(rng, dim);
  std::uniform_int_distribution<int> axis(1, dim - 1);
  std::uniform_real_distribution<Real> rapidity(-1.0, 1.0);
  const int k = axis(rng);
  const Real r = rapidity(rng);
  Mat boost = identity_mat(dim);
  boost[0] = std::cosh(r);
  boost[0 * dim + k] = std::sinh(r);
  boost[k * dim + 0] = std::sinh(r);
  boost[k * dim + k] = std::cosh(r);
  const Mat r2 = random_rotation(rng, dim);
  const Mat m = multiply(r1, multiply(boost, r2, dim), dim);
  return LorentzTransform(dim, m);
}

}  // namespace mobius
