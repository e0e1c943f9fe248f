#include "mobius/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mobius {

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

Real hermitian_sq(const ComplexLorentzVec& a) { return lorentz_dot(a, conj(a)).real(); }

Real median_of(std::vector<Real> v) {
  if (v.empty()) return 0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Clears every node within `radius` (Chebyshev distance, wrapping on periodic
// axes) of a cleared node.
void dilate(Mask& mask, const Grid& g, int radius) {
  if (radius <= 0) return;
  bool any = false;
  for (std::size_t k = 0; k < mask.size() && !any; ++k) any = !mask[k];
  if (!any) return;
  auto pass = [&](bool along_u) {
    Mask out = mask;
    const int n = along_u ? g.nu : g.nv;
    const int lines = along_u ? g.nv : g.nu;
    const bool periodic = along_u ? g.periodic_u : g.periodic_v;
    for (int line = 0; line < lines; ++line)
      for (int a = 0; a < n; ++a) {
        const unsigned char src = along_u ? mask(a, line) : mask(line, a);
        if (src) continue;
        for (int d = -radius; d <= radius; ++d) {
          int b = a + d;
          if (periodic) b = ((b % n) + n) % n;
          else if (b < 0 || b >= n) continue;
          (along_u ? out(b, line) : out(line, b)) = 0;
        }
      }
    mask = std::move(out);
  };
  pass(true);
  pass(false);
}

}  // namespace

std::size_t PipelineResult::usable_count() const {
  std::size_t n = 0;
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) n += usable(i, j);
  return n;
}

FieldStats usable_stats(const PipelineResult& r, const std::function<Real(std::size_t)>& value) {
  FieldStats st;
  Real sum = 0;
  for (int j = 0; j < r.grid.nv; ++j)
    for (int i = 0; i < r.grid.nu; ++i) {
      if (!r.usable(i, j)) continue;
      const Real x = std::abs(value(r.grid.index(i, j)));
      // NaN must not hide behind max().
      st.max = (std::isnan(x) || std::isnan(st.max)) ? kNaN : std::max(st.max, x);
      sum += x * x;
      ++st.count;
    }
  if (st.count) st.rms = std::sqrt(sum / static_cast<Real>(st.count));
  return st;
}

LiftField sample_lift(const std::function<std::vector<Real>(Real, Real)>& point, int n, const Grid& core, int ghost) {
  core.validate();
  if (n != 3 && n != 4) throw GeometryError("surfaces must lie in S^3 or S^4");
  LiftField lift{core.padded(ghost), {}, n};
  lift.F = sample(lift.grid, [&](Real u, Real v) {
    const std::vector<Real> x = point(u, v);
    if (static_cast<int>(x.size()) != n + 1) throw GeometryError("point has the wrong dimension for S^n");
    return complexify(lift_point(x));
  });
  return lift;
}

LiftField sample_lift(const SurfaceSpec& spec, const Grid& core, int ghost) {
  const auto point = [&](Real u, Real v) { return evaluate(spec, u, v); };
  // Ghost nodes are sampled off the declared domain; if the closed form is not
  // defined there, fall back to thinner padding.
  for (int pad = ghost;; pad /= 2) {
    try {
      return sample_lift(point, sphere_dim(spec.target), core, pad);
    } catch (const EvalError&) {
      if (pad == 0) throw;
    }
  }
}

LiftField transform_lift(const LiftField& lift, const LorentzTransform& m) {
  if (m.dim() != lift.n + 2) throw GeometryError("Lorentz transform dimension does not match the surface");
  LiftField out = lift;
  for (std::size_t k = 0; k < out.F.size(); ++k) {
    const LorentzVec y = m.apply(real_part(lift.F[k]));
    out.F[k] = complexify(lift_point(project_to_sphere(y)));
  }
  return out;
}

LorentzVec conformal_barycenter(const LiftField& lift) {
  const Grid& g = lift.grid;
  const int dim = lift.n + 2;
  LorentzVec T(dim);
  T[0] = 1;
  for (int it = 0; it < 200; ++it) {
    LorentzVec S(dim);
    for (int j = 0; j < g.nv; ++j)
      for (int i = 0; i < g.nu; ++i) {
        if (!g.is_core(i, j)) continue;
        const LorentzVec f = real_part(lift.F[g.index(i, j)]);
        const Real w = -lorentz_dot(f, T);
        if (!(w > 0)) throw GeometryError("conformal_barycenter: lift vector is not future null");
        for (int c = 0; c < dim; ++c) S[c] += f[c] / w;
      }
    const Real norm2 = -lorentz_dot(S, S);
    if (!(norm2 > 0)) throw GeometryError("conformal_barycenter: lift concentrates on a single point");
    const Real norm = std::sqrt(norm2);
    Real step = 0;
    for (int c = 0; c < dim; ++c) {
      const Real next = S[c] / norm;
      step = std::max(step, std::abs(next - T[c]));
      T[c] = next;
    }
    if (step < 1e-15) return T;
  }
  throw GeometryError("conformal_barycenter: iteration did not converge");
}

LiftField center_lift(const LiftField& lift) {
  const LorentzVec T = conformal_barycenter(lift);
  LiftField out = lift;
  for (ComplexLorentzVec& f : out.F.data()) f = f / -lorentz_dot(real_part(f), T);
  return out;
}

VecField canonical_lift(const VecField& F, const Grid& g, Mask& mask, Real floor) {
  const VecField Fz = d_z(F, g);
  VecField Y(g);
  for (std::size_t k = 0; k < F.size(); ++k) {
    Real m = hermitian_sq(Fz[k]);
    if (!(m > floor)) {
      mask[k] = 0;
      m = floor;
    }
    Y[k] = F[k] / std::sqrt(2 * m);
  }
  return Y;
}

VecField canonical_lift(const SurfaceSpec& spec, const Grid& g) {
  const LiftField lift = sample_lift(spec, g, 0);
  Mask mask(g, 1);
  return canonical_lift(lift.F, g, mask);
}

FrameField build_frame(const VecField& Y, const Grid& g) {
  FrameField fr;
  fr.Y = Y;
  fr.Yz = d_z(Y, g);
  fr.Yzb = conj(fr.Yz);
  fr.Yzz = d_z(fr.Yz, g);
  fr.Yzzb = d_zbar(fr.Yz, g);
  fr.N = VecField(g);
  for (std::size_t k = 0; k < Y.size(); ++k) {
    // Y_zzbar is real for a real Y; drop the rounding-level imaginary part.
    fr.Yzzb[k] = complexify(real_part(fr.Yzzb[k]));
    fr.N[k] = Real(2) * fr.Yzzb[k] + Real(2) * lorentz_dot(fr.Yzzb[k], fr.Yzzb[k]) * Y[k];
  }
  return fr;
}

SchwarzianHopf schwarzian_hopf(const FrameField& fr, const Grid& g) {
  SchwarzianHopf out{ScalarField(g), VecField(g)};
  for (std::size_t k = 0; k < out.s.size(); ++k) {
    out.s[k] = Real(2) * lorentz_dot(fr.Yzz[k], fr.N[k]);
    out.kappa[k] = fr.Yzz[k] + (out.s[k] / Real(2)) * fr.Y[k];
  }
  return out;
}

namespace {

MetricCurvature metric_curvature_floor(const VecField& kappa, const Grid& g, Real kk_floor) {
  MetricCurvature mc{RealField(g), RealField(g), RealField(g)};
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    mc.kk[k] = hermitian_sq(kappa[k]);
    mc.omega[k] = 0.5 * std::log(4 * std::max(mc.kk[k], kk_floor));
  }
  const ScalarField lap = laplacian_conformal(to_complex(mc.omega), mc.omega, g);
  for (std::size_t k = 0; k < lap.size(); ++k) mc.K[k] = -lap[k].real();
  return mc;
}

}  // namespace

MetricCurvature metric_curvature(const VecField& kappa, const Grid& g) {
  return metric_curvature_floor(kappa, g, 1e-150);
}

ComplexLorentzVec project_tangent(const ComplexLorentzVec& w, const FrameField& fr, std::size_t k) {
  return -lorentz_dot(w, fr.N[k]) * fr.Y[k] - lorentz_dot(w, fr.Y[k]) * fr.N[k] +
         Real(2) * lorentz_dot(w, fr.Yzb[k]) * fr.Yz[k] + Real(2) * lorentz_dot(w, fr.Yz[k]) * fr.Yzb[k];
}

NormalDerivative normal_connection(const VecField& xi, const FrameField& fr, const Grid& g, const Mask& mask,
                                   int margin, bool check) {
  // Tangential part relative to the largest |xi| on the usable nodes, but never
  // below an absolute 1e-6: a section that is numerically zero (e.g. the
  // derivative of a parallel normal) inherits the projector's own defect.
  Real worst = 0, scale = 1;
  for (int j = 0; check && j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      if (!mask(i, j) || !g.is_interior(i, j, margin)) continue;
      const std::size_t k = g.index(i, j);
      scale = std::max(scale, euclid_norm(xi[k]));
      worst = std::max(worst, euclid_norm(project_tangent(xi[k], fr, k)));
    }
  worst /= scale;
  if (worst > 1e-6)
    throw GeometryError("section is not normal: tangential component " + std::to_string(static_cast<double>(worst)) + " exceeds 1e-6");

  NormalDerivative out{d_z(xi, g), d_zbar(xi, g)};
  for (std::size_t k = 0; k < xi.size(); ++k) {
    out.Dz[k] -= project_tangent(out.Dz[k], fr, k);
    out.Dzb[k] -= project_tangent(out.Dzb[k], fr, k);
  }
  return out;
}

RealField unwrap_phase(const ScalarField& P, const Mask& mask, Real floor) {
  const int nu = P.nu(), nv = P.nv();
  RealField psi(nu, nv, kNaN);
  for (std::size_t k = 0; k < P.size(); ++k)
    if (mask[k] && std::abs(P[k]) >= floor) psi[k] = std::arg(P[k]);

  const Real two_pi = 2 * std::numbers::pi_v<Real>;
  auto follow = [&](Real& prev, Real& x) {
    if (std::isnan(x)) return;
    if (!std::isnan(prev)) x += two_pi * std::round((prev - x) / two_pi);
    prev = x;
  };
  // Reference row through the middle, then every column outwards from it.
  const int jm = nv / 2;
  Real prev = kNaN;
  for (int i = 0; i < nu; ++i) follow(prev, psi(i, jm));
  for (int i = 0; i < nu; ++i) {
    Real up = psi(i, jm), down = psi(i, jm);
    for (int j = jm + 1; j < nv; ++j) follow(up, psi(i, j));
    for (int j = jm - 1; j >= 0; --j) follow(down, psi(i, j));
  }

  std::vector<Real> valid;
  for (Real x : psi.data())
    if (!std::isnan(x)) valid.push_back(x);
  if (!valid.empty()) {
    const Real med = median_of(valid);
    // Shift by a multiple of 2 pi so that the median lands in (-pi, pi].
    const Real shift = -two_pi * std::ceil((med - std::numbers::pi_v<Real>) / two_pi);
    if (shift != 0)
      for (Real& x : psi.data()) x += shift;
  }
  return psi;
}

MuRhoP mu_rho_P(const VecField& kappa, const NormalDerivative& dk, const RealField& kk, const Grid& g,
                const Mask& mask, Real psi_floor) {
  MuRhoP out;
  out.mubar = ScalarField(g);
  out.lambda = ScalarField(g);
  out.sres_swillmore = RealField(g);
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    const ComplexLorentzVec kb = conj(kappa[k]);
    out.mubar[k] = Real(-2) * lorentz_dot(dk.Dzb[k], kb) / kk[k];
    out.lambda[k] = lorentz_dot(dk.Dz[k], kb) / kk[k];
    out.sres_swillmore[k] =
        euclid_norm(dk.Dzb[k] + (out.mubar[k] / Real(2)) * kappa[k]) / euclid_norm(kappa[k]);
  }
  out.mu = conj(out.mubar);
  const ScalarField dmubar = d_z(out.mubar, g);
  out.rho = ScalarField(g);
  out.P = ScalarField(g);
  out.Theta = ScalarField(g);
  for (std::size_t k = 0; k < kappa.size(); ++k) {
    out.rho[k] = dmubar[k] - 2 * kk[k];
    out.P[k] = out.rho[k] / kk[k];
    out.Theta[k] = out.rho[k] * lorentz_dot(kappa[k], kappa[k]);
  }
  out.psi = unwrap_phase(out.P, mask, psi_floor);
  return out;
}

PipelineResult run_pipeline(const LiftField& lift, const std::string& name, const PipelineOptions& opt) {
  const Grid& g = lift.grid;
  PipelineResult r;
  r.name = name;
  r.n = lift.n;
  r.grid = g;
  r.margin = opt.margin;
  r.mask = Mask(g, 1);

  const LiftField centered = opt.center ? center_lift(lift) : lift;
  r.frame = build_frame(canonical_lift(centered.F, g, r.mask, opt.immersion_floor), g);
  SchwarzianHopf sh = schwarzian_hopf(r.frame, g);

  std::vector<Real> core_e2w;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i)
      if (g.is_core(i, j)) core_e2w.push_back(4 * hermitian_sq(sh.kappa[g.index(i, j)]));
  const Real threshold = std::max(opt.umbilic_rel * median_of(core_e2w), opt.umbilic_abs);
  for (std::size_t k = 0; k < sh.kappa.size(); ++k)
    if (!(4 * hermitian_sq(sh.kappa[k]) >= threshold)) r.mask[k] = 0;
  dilate(r.mask, g, opt.dilate);
  if (r.usable_count() == 0)
    throw GeometryError("surface '" + name + "' has no immersed, umbilic-free interior node on this grid");

  const MetricCurvature mc = metric_curvature_floor(sh.kappa, g, threshold / 4);
  RealField kk_safe = mc.kk;
  for (Real& x : kk_safe.data()) x = std::max(x, threshold / 4);

  InvariantField& inv = r.inv;
  inv.omega = mc.omega;
  inv.K = mc.K;
  inv.kk = kk_safe;
  inv.kk_floor = threshold / 4;
  inv.s = std::move(sh.s);
  inv.kappa = std::move(sh.kappa);
  inv.Dkappa = normal_connection(inv.kappa, r.frame, g, r.mask, r.margin, false);

  MuRhoP m = mu_rho_P(inv.kappa, inv.Dkappa, kk_safe, g, r.mask, opt.psi_floor);
  inv.mu = std::move(m.mu);
  inv.mubar = std::move(m.mubar);
  inv.rho = std::move(m.rho);
  inv.P = std::move(m.P);
  inv.Theta = std::move(m.Theta);
  inv.lambda = std::move(m.lambda);
  inv.psi = std::move(m.psi);
  inv.sres_swillmore = std::move(m.sres_swillmore);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i)
      if (!g.is_core(i, j)) inv.psi(i, j) = kNaN;
  return r;
}

PipelineResult run_pipeline(const SurfaceSpec& spec, const Grid& core, const PipelineOptions& opt) {
  return run_pipeline(sample_lift(spec, core, opt.ghost), spec.name, opt);
}

PipelineResult run_pipeline(const SurfaceSpec& spec, const PipelineOptions& opt) {
  return run_pipeline(spec, spec.grid, opt);
}

DualSurface dual_surface(const PipelineResult& r, Real defect_tol) {
  const FieldStats defect = usable_stats(r, [&](std::size_t k) { return r.inv.sres_swillmore[k]; });
  if (!(defect.max <= defect_tol))
    throw GeometryError("dual surface needs an S-Willmore surface: defect " + std::to_string(defect.max) +
                        " exceeds " + std::to_string(defect_tol));
  const Grid& g = r.grid;
  const FrameField& fr = r.frame;
  DualSurface d;
  d.Yhat = VecField(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex mu = r.inv.mu[k];
    d.Yhat[k] = (std::norm(mu) / 2) * fr.Y[k] + std::conj(mu) * fr.Yz[k] + mu * fr.Yzb[k] + fr.N[k];
  }
  d.Yhat_z = d_z(d.Yhat, g);
  d.res_derivative = RealField(g);
  d.res_isotropic = RealField(g);
  d.res_metric = RealField(g);
  d.res_null = RealField(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex mu = r.inv.mu[k];
    const Complex rho = r.inv.rho[k];
    const ComplexLorentzVec expected = (mu / Real(2)) * d.Yhat[k] + rho * (fr.Yz[k] + (mu / Real(2)) * fr.Y[k]);
    d.res_derivative[k] = euclid_norm(d.Yhat_z[k] - expected);
    d.res_isotropic[k] = std::abs(lorentz_dot(d.Yhat_z[k], d.Yhat_z[k]));
    d.res_metric[k] = std::abs(hermitian_sq(d.Yhat_z[k]) - std::norm(rho) / 2);
    d.res_null[k] = std::abs(lorentz_dot(d.Yhat[k], d.Yhat[k]));
  }
  return d;
}

Real willmore_functional(const VecField& kappa, const Grid& g) {
  RealField kk(g), one(g, 1.0);
  for (std::size_t k = 0; k < kappa.size(); ++k) kk[k] = 4 * hermitian_sq(kappa[k]);
  return integrate_density(kk, one, g);
}

EuclideanShape euclidean_shape(const SurfaceSpec& spec, const Grid& core, int ghost) {
  if (spec.target != Target::R3) throw GeometryError("Euclidean shape operator needs an R3 surface");
  core.validate();
  Grid g = core.padded(ghost);
  std::array<RealField, 3> f;
  for (;;) {
    try {
      for (int c = 0; c < 3; ++c) f[c] = RealField(g);
      for (int j = 0; j < g.nv; ++j)
        for (int i = 0; i < g.nu; ++i) {
          const std::vector<Real> x = evaluate_raw(spec, g.u(i), g.v(j));
          for (int c = 0; c < 3; ++c) f[c](i, j) = x[c];
        }
      break;
    } catch (const EvalError&) {
      if (ghost == 0) throw;
      ghost /= 2;
      g = core.padded(ghost);
    }
  }
  std::array<RealField, 3> fu, fv, fuu, fuv, fvv;
  for (int c = 0; c < 3; ++c) {
    fu[c] = d_u(f[c], g);
    fv[c] = d_v(f[c], g);
    fuu[c] = d_u(fu[c], g);
    fuv[c] = d_v(fu[c], g);
    fvv[c] = d_v(fv[c], g);
  }
  EuclideanShape out{RealField(g), RealField(g), RealField(g), 0, g};
  RealField density(g), one(g, 1.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::array<Real, 3> a{fu[0][k], fu[1][k], fu[2][k]};
    const std::array<Real, 3> b{fv[0][k], fv[1][k], fv[2][k]};
    std::array<Real, 3> n{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const Real len = std::hypot(n[0], n[1], n[2]);
    for (Real& x : n) x /= len;
    Real E = 0, F = 0, G = 0, L = 0, M = 0, N = 0;
    for (int c = 0; c < 3; ++c) {
      E += a[c] * a[c];
      F += a[c] * b[c];
      G += b[c] * b[c];
      L += fuu[c][k] * n[c];
      M += fuv[c][k] * n[c];
      N += fvv[c][k] * n[c];
    }
    const Real det = E * G - F * F;
    out.K_euclid[k] = (L * N - M * M) / det;
    out.H[k] = (E * N - 2 * F * M + G * L) / (2 * det);
    out.dM[k] = std::sqrt(det);
    density[k] = (out.H[k] * out.H[k] - out.K_euclid[k]) * out.dM[k];
  }
  out.W_tilde = integrate_density(density, one, g);
  return out;
}

}  // namespace mobius
