#pragma once
/**
 * @file diffgrid.hpp
 * @brief Rectangular sampling grids in the complex coordinate z = u + i v and
 * the operators d/dz, d/dzbar, the conformal Laplacian 4 e^{-2w} d_z d_zbar,
 * and area quadrature.
 *
 * Periodic axes are differentiated spectrally (dense Fourier differentiation
 * matrix); non-periodic axes use 7-point sixth-order finite differences with
 * one-sided stencils at the boundary.
 *
 * A grid may carry ghost nodes on its non-periodic axes. Fields are computed
 * on the whole (padded) grid, while statistics and quadrature only look at
 * the core nodes; see Grid::padded and Grid::is_interior.
 */

#include <array>
#include <functional>
#include <vector>

#include "mobius/minkowski.hpp"
#include "mobius/parallel.hpp"
#include "mobius/types.hpp"

namespace mobius {

struct Grid {
  Real u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  int nu = 16, nv = 16;
  bool periodic_u = false, periodic_v = false;
  /// Ghost nodes at each end of the u / v axis (non-periodic axes only).
  int ghost_u = 0, ghost_v = 0;

  Real hu() const { return periodic_u ? (u1 - u0) / nu : (u1 - u0) / (nu - 1); }
  Real hv() const { return periodic_v ? (v1 - v0) / nv : (v1 - v0) / (nv - 1); }
  Real u(int i) const { return u0 + i * hu(); }
  Real v(int j) const { return v0 + j * hv(); }
  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nu + i; }

  /// Throws unless ranges are increasing and both counts are at least 16.
  void validate() const;

  /// Same spacing, with `pad` extra nodes at both ends of each non-periodic axis.
  Grid padded(int pad) const;
  /// The grid without its ghost nodes.
  Grid core() const;

  /// Node is outside the ghost layers.
  bool is_core(int i, int j) const;
  /// Node is a core node at least `margin` nodes from every non-periodic core edge.
  bool is_interior(int i, int j, int margin) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Per-node values laid out u-fastest: index = j * nu + i.
template <class T>
class NodeField {
 public:
  NodeField() = default;
  NodeField(int nu, int nv, const T& init = T{}) : nu_(nu), nv_(nv), data_(static_cast<std::size_t>(nu) * nv, init) {}
  explicit NodeField(const Grid& g, const T& init = T{}) : NodeField(g.nu, g.nv, init) {}

  int nu() const { return nu_; }
  int nv() const { return nv_; }
  std::size_t size() const { return data_.size(); }
  bool matches(const Grid& g) const { return g.nu == nu_ && g.nv == nv_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * nu_ + i]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * nu_ + i]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  int nu_ = 0, nv_ = 0;
  std::vector<T> data_;
};

using ScalarField = NodeField<Complex>;
using RealField = NodeField<Real>;
using VecField = NodeField<ComplexLorentzVec>;
using Mask = NodeField<unsigned char>;

/// Elementwise map producing a new field of the same shape.
template <class F, class T, class... Rest>
auto map_nodes(F&& f, const NodeField<T>& first, const NodeField<Rest>&... rest) {
  using R = std::invoke_result_t<F&, const T&, const Rest&...>;
  NodeField<R> out(first.nu(), first.nv());
  for (std::size_t k = 0; k < first.size(); ++k) out[k] = f(first[k], rest[k]...);
  return out;
}

/// First-derivative operator along one axis.
class AxisDerivative {
 public:
  static constexpr int kStencil = 7;

  AxisDerivative(int n, Real h, bool periodic);

  int size() const { return n_; }
  bool periodic() const { return periodic_; }

  /// out[i] = sum_k w_ik in[k] over a strided line.
  template <class T>
  void apply(const T* in, std::ptrdiff_t stride, T* out) const {
    if (periodic_) {
      for (int i = 0; i < n_; ++i) {
        const Real* row = &dense_[static_cast<std::size_t>(i) * n_];
        T acc = Real(0) * in[0];
        for (int k = 0; k < n_; ++k) acc += row[k] * in[k * stride];
        out[i * stride] = acc;
      }
    } else {
      for (int i = 0; i < n_; ++i) {
        const int s = start_[i];
        const auto& w = weights_[i];
        T acc = w[0] * in[s * stride];
        for (int k = 1; k < kStencil; ++k) acc += w[k] * in[(s + k) * stride];
        out[i * stride] = acc;
      }
    }
  }

 private:
  int n_;
  bool periodic_;
  std::vector<Real> dense_;
  std::vector<int> start_;
  std::vector<std::array<Real, kStencil>> weights_;
};

/// Finite-difference weights for the m-th derivative at z from nodes x
/// (Fornberg's recursion).
std::vector<Real> fd_weights(Real z, const std::vector<Real>& x, int m);

namespace detail {

template <class T>
NodeField<T> diff_axis(const NodeField<T>& f, const Grid& g, bool along_u) {
  if (!f.matches(g)) throw GeometryError("field shape does not match grid");
  const int n = along_u ? g.nu : g.nv;
  const bool periodic = along_u ? g.periodic_u : g.periodic_v;
  if (!periodic && n < AxisDerivative::kStencil)
    throw GeometryError("grid has fewer nodes than the finite-difference stencil width");
  const AxisDerivative op(n, along_u ? g.hu() : g.hv(), periodic);
  NodeField<T> out(g.nu, g.nv);
  const int lines = along_u ? g.nv : g.nu;
  const std::ptrdiff_t stride = along_u ? 1 : g.nu;
  parallel_for(static_cast<std::size_t>(lines), [&](std::size_t line) {
    const std::size_t base = along_u ? line * static_cast<std::size_t>(g.nu) : line;
    op.apply(f.data().data() + base, stride, out.data().data() + base);
  });
  return out;
}

// 0.5 * (a + sign * i * b), evaluated componentwise in real arithmetic so that
// d_z(conj f) == conj(d_zbar f) holds bit for bit.
inline Complex half_combine(const Complex& a, const Complex& b, int sign) {
  return {0.5 * (a.real() - sign * b.imag()), 0.5 * (a.imag() + sign * b.real())};
}
inline ComplexLorentzVec half_combine(const ComplexLorentzVec& a, const ComplexLorentzVec& b, int sign) {
  ComplexLorentzVec r(a.dim());
  for (int k = 0; k < a.dim(); ++k) r[k] = half_combine(a[k], b[k], sign);
  return r;
}

template <class T>
NodeField<T> d_complex(const NodeField<T>& f, const Grid& g, int sign) {
  const NodeField<T> fu = diff_axis(f, g, true);
  const NodeField<T> fv = diff_axis(f, g, false);
  NodeField<T> out(g.nu, g.nv);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = half_combine(fu[k], fv[k], sign);
  return out;
}

}  // namespace detail

template <class T>
NodeField<T> d_u(const NodeField<T>& f, const Grid& g) {
  return detail::diff_axis(f, g, true);
}
template <class T>
NodeField<T> d_v(const NodeField<T>& f, const Grid& g) {
  return detail::diff_axis(f, g, false);
}

/// d/dz = (d/du - i d/dv) / 2.
template <class T>
NodeField<T> d_z(const NodeField<T>& f, const Grid& g) {
  return detail::d_complex(f, g, -1);
}

/// d/dzbar = (d/du + i d/dv) / 2.
template <class T>
NodeField<T> d_zbar(const NodeField<T>& f, const Grid& g) {
  return detail::d_complex(f, g, +1);
}

/// 4 e^{-2 omega} d_z d_zbar f.
ScalarField laplacian_conformal(const ScalarField& f, const RealField& omega, const Grid& g);

/// Quadrature of f * weight du dv over the core nodes: trapezoidal on
/// non-periodic axes, rectangle rule on periodic axes. Summation order is fixed.
Real integrate_density(const RealField& f, const RealField& weight, const Grid& g);

ScalarField to_complex(const RealField& f);
RealField real_part(const ScalarField& f);
ScalarField conj(const ScalarField& f);
VecField conj(const VecField& f);

/// Samples fn(u, v) on every node.
template <class F>
auto sample(const Grid& g, F&& fn) {
  using R = std::invoke_result_t<F&, Real, Real>;
  NodeField<R> out(g.nu, g.nv);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) out(i, j) = fn(g.u(i), g.v(j));
  return out;
}

}  // namespace mobius
