#include "mobius/diffgrid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mobius {

void Grid::validate() const {
  if (!(u1 > u0) || !(v1 > v0)) throw GeometryError("grid ranges must be increasing");
  if (nu < 16 || nv < 16) throw GeometryError("grid needs at least 16 nodes per axis");
  if ((periodic_u && ghost_u) || (periodic_v && ghost_v)) throw GeometryError("periodic axes carry no ghost nodes");
}

Grid Grid::padded(int pad) const {
  Grid g = *this;
  if (!periodic_u) {
    const Real h = hu();
    g.u0 = u0 - pad * h;
    g.u1 = u1 + pad * h;
    g.nu = nu + 2 * pad;
    g.ghost_u = ghost_u + pad;
  }
  if (!periodic_v) {
    const Real h = hv();
    g.v0 = v0 - pad * h;
    g.v1 = v1 + pad * h;
    g.nv = nv + 2 * pad;
    g.ghost_v = ghost_v + pad;
  }
  return g;
}

Grid Grid::core() const {
  Grid g = *this;
  if (ghost_u) {
    const Real h = hu();
    g.u0 = u0 + ghost_u * h;
    g.u1 = u1 - ghost_u * h;
    g.nu = nu - 2 * ghost_u;
    g.ghost_u = 0;
  }
  if (ghost_v) {
    const Real h = hv();
    g.v0 = v0 + ghost_v * h;
    g.v1 = v1 - ghost_v * h;
    g.nv = nv - 2 * ghost_v;
    g.ghost_v = 0;
  }
  return g;
}

bool Grid::is_core(int i, int j) const {
  return i >= ghost_u && i < nu - ghost_u && j >= ghost_v && j < nv - ghost_v;
}

bool Grid::is_interior(int i, int j, int margin) const {
  if (!is_core(i, j)) return false;
  if (!periodic_u && (i < ghost_u + margin || i >= nu - ghost_u - margin)) return false;
  if (!periodic_v && (j < ghost_v + margin || j >= nv - ghost_v - margin)) return false;
  return true;
}

std::vector<Real> fd_weights(Real z, const std::vector<Real>& x, int m) {
  const int n = static_cast<int>(x.size());
  // c[j][k]: weight of node j for derivative order k.
  std::vector<std::vector<Real>> c(n, std::vector<Real>(m + 1, 0.0));
  Real c1 = 1, c4 = x[0] - z;
  c[0][0] = 1;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    Real c2 = 1;
    const Real c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const Real c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<Real> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][m];
  return w;
}

AxisDerivative::AxisDerivative(int n, Real h, bool periodic) : n_(n), periodic_(periodic) {
  if (periodic) {
    // Fourier differentiation matrix on n equispaced nodes of one period n*h.
    dense_.assign(static_cast<std::size_t>(n) * n, 0.0);
    const Real scale = std::numbers::pi_v<Real> / (n * h);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (i == k) continue;
        const int d = i - k;
        const Real sgn = (std::abs(d) % 2 == 0) ? 1.0 : -1.0;
        const Real t = std::numbers::pi_v<Real> * d / n;
        const Real val = (n % 2 == 0) ? sgn / std::tan(t) : sgn / std::sin(t);
        dense_[static_cast<std::size_t>(i) * n + k] = scale * val;
      }
    return;
  }
  start_.resize(n);
  weights_.resize(n);
  constexpr int half = kStencil / 2;
  for (int i = 0; i < n; ++i) {
    const int s = std::clamp(i - half, 0, n - kStencil);
    std::vector<Real> x(kStencil);
    for (int k = 0; k < kStencil; ++k) x[k] = static_cast<Real>(s + k - i);
    const std::vector<Real> w = fd_weights(0.0, x, 1);
    start_[i] = s;
    for (int k = 0; k < kStencil; ++k) weights_[i][k] = w[k] / h;
  }
}

ScalarField laplacian_conformal(const ScalarField& f, const RealField& omega, const Grid& g) {
  const ScalarField fzz = d_z(d_zbar(f, g), g);
  ScalarField out(g.nu, g.nv);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 4.0 * std::exp(-2.0 * omega[k]) * fzz[k];
  return out;
}

Real integrate_density(const RealField& f, const RealField& weight, const Grid& g) {
  if (!f.matches(g) || !weight.matches(g)) throw GeometryError("field shape does not match grid");
  Real total = 0;
  const int i_lo = g.ghost_u, i_hi = g.nu - g.ghost_u - 1;
  const int j_lo = g.ghost_v, j_hi = g.nv - g.ghost_v - 1;
  for (int j = j_lo; j <= j_hi; ++j) {
    const Real wv = (!g.periodic_v && (j == j_lo || j == j_hi)) ? 0.5 : 1.0;
    Real row = 0;
    for (int i = i_lo; i <= i_hi; ++i) {
      const Real wu = (!g.periodic_u && (i == i_lo || i == i_hi)) ? 0.5 : 1.0;
      row += wu * f(i, j) * weight(i, j);
    }
    total += wv * row;
  }
  return total * g.hu() * g.hv();
}

ScalarField to_complex(const RealField& f) {
  return map_nodes([](Real x) { return Complex(x, 0.0); }, f);
}

RealField real_part(const ScalarField& f) {
  return map_nodes([](const Complex& x) { return x.real(); }, f);
}

ScalarField conj(const ScalarField& f) {
  return map_nodes([](const Complex& x) { return std::conj(x); }, f);
}

VecField conj(const VecField& f) {
  return map_nodes([](const ComplexLorentzVec& x) { return conj(x); }, f);
}

}  // namespace mobius
