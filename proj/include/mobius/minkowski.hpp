#pragma once
/**
 * @file minkowski.hpp
 * @brief Minkowski space R^{n+1,1} (n = 3, 4), its complexification, the
 * light-cone chart of S^n and the Lorentz group.
 *
 * Signature is (-,+,...,+) with index 0 timelike. The form is extended
 * complex-bilinearly: lorentz_dot(a, b) never conjugates. A Hermitian-looking
 * pairing such as <k, conj(k)> is written explicitly as
 * lorentz_dot(k, conj(k)).
 */

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mobius/types.hpp"

namespace mobius {

inline constexpr int kMaxLorentzDim = 6;

template <class T>
class BasicLorentzVec {
 public:
  BasicLorentzVec() = default;
  explicit BasicLorentzVec(int dim) : dim_(dim) { check_dim(dim); }
  BasicLorentzVec(std::initializer_list<T> values) : dim_(static_cast<int>(values.size())) {
    check_dim(dim_);
    int i = 0;
    for (const T& x : values) c_[i++] = x;
  }

  /// Real -> complex promotion.
  template <class U>
    requires(!std::is_same_v<U, T> && std::is_convertible_v<U, T>)
  explicit BasicLorentzVec(const BasicLorentzVec<U>& other) : dim_(other.dim()) {
    for (int i = 0; i < dim_; ++i) c_[i] = T(other[i]);
  }

  static BasicLorentzVec basis(int dim, int k) {
    BasicLorentzVec e(dim);
    e[k] = T(1);
    return e;
  }

  int dim() const { return dim_; }
  T& operator[](int i) { return c_[i]; }
  const T& operator[](int i) const { return c_[i]; }
  std::span<const T> components() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  BasicLorentzVec& operator+=(const BasicLorentzVec& o) {
    for (int i = 0; i < kMaxLorentzDim; ++i) c_[i] += o.c_[i];
    dim_ = dim_ ? dim_ : o.dim_;
    return *this;
  }
  BasicLorentzVec& operator-=(const BasicLorentzVec& o) {
    for (int i = 0; i < kMaxLorentzDim; ++i) c_[i] -= o.c_[i];
    dim_ = dim_ ? dim_ : o.dim_;
    return *this;
  }
  template <class S>
  BasicLorentzVec& operator*=(const S& s) {
    for (int i = 0; i < kMaxLorentzDim; ++i) c_[i] *= s;
    return *this;
  }

  friend BasicLorentzVec operator+(BasicLorentzVec a, const BasicLorentzVec& b) { return a += b; }
  friend BasicLorentzVec operator-(BasicLorentzVec a, const BasicLorentzVec& b) { return a -= b; }
  friend BasicLorentzVec operator-(BasicLorentzVec a) { return a *= Real(-1); }
  template <class S>
  friend BasicLorentzVec operator*(const S& s, BasicLorentzVec a) {
    return a *= s;
  }
  template <class S>
  friend BasicLorentzVec operator*(BasicLorentzVec a, const S& s) {
    return a *= s;
  }
  template <class S>
  friend BasicLorentzVec operator/(BasicLorentzVec a, const S& s) {
    for (int i = 0; i < kMaxLorentzDim; ++i) a.c_[i] /= s;
    return a;
  }
  friend bool operator==(const BasicLorentzVec&, const BasicLorentzVec&) = default;

 private:
  static void check_dim(int dim) {
    if (dim < 1 || dim > kMaxLorentzDim) throw GeometryError("Lorentz vector dimension out of range");
  }

  // Unused trailing slots stay zero so that arithmetic can run over the full array.
  std::array<T, kMaxLorentzDim> c_{};
  int dim_ = 0;
};

using LorentzVec = BasicLorentzVec<Real>;
using ComplexLorentzVec = BasicLorentzVec<Complex>;

/// Bilinear Minkowski product -a0 b0 + sum ai bi. Throws on dimension mismatch.
Real lorentz_dot(const LorentzVec& a, const LorentzVec& b);
Complex lorentz_dot(const ComplexLorentzVec& a, const ComplexLorentzVec& b);

ComplexLorentzVec conj(const ComplexLorentzVec& a);
LorentzVec real_part(const ComplexLorentzVec& a);
LorentzVec imag_part(const ComplexLorentzVec& a);
ComplexLorentzVec complexify(const LorentzVec& a);

/// Euclidean length of the coefficient vector; used for residual norms where
/// the Minkowski form is indefinite.
Real euclid_norm(const LorentzVec& a);
Real euclid_norm(const ComplexLorentzVec& a);

/// Maps a null vector to its point (Y1..Y_{n+1})/Y0 on S^n.
std::vector<Real> project_to_sphere(const LorentzVec& y);

/// The null vector (1, x) for a point x of S^n.
LorentzVec lift_point(std::span<const Real> x);

class LorentzTransform {
 public:
  /// Validates M^T eta M = eta to 1e-12 and M00 > 0.
  LorentzTransform(int dim, std::span<const Real> row_major);

  static LorentzTransform identity(int dim);

  int dim() const { return dim_; }
  Real operator()(int r, int c) const { return m_[r * dim_ + c]; }

  LorentzVec apply(const LorentzVec& v) const;
  ComplexLorentzVec apply(const ComplexLorentzVec& v) const;
  LorentzTransform compose(const LorentzTransform& right) const;

  /// max |M^T eta M - eta| entrywise.
  Real form_defect() const;

 private:
  LorentzTransform() = default;
  int dim_ = 0;
  std::array<Real, kMaxLorentzDim * kMaxLorentzDim> m_{};
};

/// Deterministic random orthochronous transform of R^{n+1,1}: a random
/// rotation, one boost of rapidity in [-1, 1] in a (0, k) plane, and a second
/// random rotation.
LorentzTransform random_lorentz(std::uint64_t seed, int n);

}  // namespace mobius
