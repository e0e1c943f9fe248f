#include "mobius/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mobius {

namespace {

Real hermitian_sq(const ComplexLorentzVec& a) { return lorentz_dot(a, conj(a)).real(); }

template <class Pred, class Value>
FieldStats stats_where(const PipelineResult& r, Pred&& keep, Value&& value) {
  FieldStats st;
  Real sum = 0;
  for (int j = 0; j < r.grid.nv; ++j)
    for (int i = 0; i < r.grid.nu; ++i) {
      if (!r.usable(i, j)) continue;
      const std::size_t k = r.grid.index(i, j);
      if (!keep(k)) continue;
      const Real x = std::abs(value(k));
      st.max = (std::isnan(x) || std::isnan(st.max)) ? std::numeric_limits<Real>::quiet_NaN() : std::max(st.max, x);
      sum += x * x;
      ++st.count;
    }
  if (st.count) st.rms = std::sqrt(sum / static_cast<Real>(st.count));
  return st;
}

FieldStats stats_of(const PipelineResult& r, const RealField& f) {
  return usable_stats(r, [&](std::size_t k) { return f[k]; });
}

std::string fmt(const char* pattern, Real a, Real b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, static_cast<double>(a), static_cast<double>(b));
  return buf;
}

Real max_abs_P(const PipelineResult& r) {
  return usable_stats(r, [&](std::size_t k) { return std::abs(r.inv.P[k]); }).max;
}

Real max_isotropy(const PipelineResult& r) {
  return usable_stats(r, [&](std::size_t k) { return std::abs(lorentz_dot(r.inv.kappa[k], r.inv.kappa[k])); }).max;
}

// D_zbar D_zbar kappa + (conj s / 2) kappa.
VecField willmore_vector(const PipelineResult& r, const VecField& kappa, const NormalDerivative& dk) {
  const NormalDerivative dd = normal_connection(dk.Dzb, r.frame, r.grid, r.mask, r.margin, false);
  VecField out(r.grid);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = dd.Dzb[k] + (std::conj(r.inv.s[k]) / Real(2)) * kappa[k];
  return out;
}

RealField relative_norm(const VecField& v, const VecField& kappa) {
  RealField out(v.nu(), v.nv());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = euclid_norm(v[k]) / euclid_norm(kappa[k]);
  return out;
}

RealField gauss_field(const PipelineResult& r, const VecField& kappa, const NormalDerivative& dk) {
  const ScalarField s_zb = d_zbar(r.inv.s, r.grid);
  RealField out(r.grid);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::abs(s_zb[k] / Real(2) - Real(3) * lorentz_dot(conj(dk.Dzb[k]), kappa[k]) -
                      lorentz_dot(conj(kappa[k]), dk.Dz[k]));
  return out;
}

// Max over the normal basis of |D_zbar D_z xi - D_z D_zbar xi - 2<xi,k> conj k + 2<xi, conj k> k|.
RealField ricci_field(const PipelineResult& r, const std::vector<VecField>& basis, const VecField& kappa) {
  RealField out(r.grid, 0.0);
  for (const VecField& xi : basis) {
    const NormalDerivative d = normal_connection(xi, r.frame, r.grid, r.mask, r.margin, false);
    const VecField a = normal_connection(d.Dz, r.frame, r.grid, r.mask, r.margin, false).Dzb;
    const VecField b = normal_connection(d.Dzb, r.frame, r.grid, r.mask, r.margin, false).Dz;
    for (std::size_t k = 0; k < out.size(); ++k) {
      const ComplexLorentzVec kb = conj(kappa[k]);
      const ComplexLorentzVec res = a[k] - b[k] - Real(2) * lorentz_dot(xi[k], kappa[k]) * kb +
                                    Real(2) * lorentz_dot(xi[k], kb) * kappa[k];
      out[k] = std::max(out[k], euclid_norm(res));
    }
  }
  return out;
}

constexpr const char* kRicciLabel = "D_zbar D_z xi - D_z D_zbar xi = 2<xi,kappa> conj(kappa) - 2<xi,conj(kappa)> kappa";
constexpr const char* kGaussLabel = "s_zbar / 2 = 3<D_z conj(kappa), kappa> + <conj(kappa), D_z kappa>";
constexpr const char* kWillmoreLabel = "D_zbar D_zbar kappa + (conj(s)/2) kappa = 0";

ResidualReport base_report(const PipelineResult& r) {
  ResidualReport rep;
  rep.surface = r.name;
  rep.grid = r.grid.core();
  return rep;
}

}  // namespace

Real default_tolerance(const Grid& g) { return (g.periodic_u && g.periodic_v) ? 1e-6 : 1e-4; }

namespace {

Real det(std::vector<std::array<Real, kMaxLorentzDim>> m, int n) {
  Real d = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(m[i][c]) > std::abs(m[p][c])) p = i;
    if (m[p][c] == 0) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (int i = c + 1; i < n; ++i) {
      const Real f = m[i][c] / m[c][c];
      for (int k = c; k < n; ++k) m[i][k] -= f * m[c][k];
    }
  }
  return d;
}

// X with <X, x> = det[x; rows...] for every x; orthogonal to every row.
LorentzVec minkowski_cross(const std::vector<LorentzVec>& rows) {
  const int n = rows.front().dim();
  LorentzVec out(n);
  std::vector<std::array<Real, kMaxLorentzDim>> m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    m[0].fill(0);
    m[0][i] = 1;
    for (int r = 0; r + 1 < n; ++r)
      for (int c = 0; c < n; ++c) m[r + 1][c] = rows[r][c];
    out[i] = (i == 0 ? -1 : 1) * det(m, n);
  }
  return out;
}

}  // namespace

std::vector<VecField> normal_basis(const PipelineResult& r) {
  const int dim = r.n + 2;
  const int rank = r.n - 2;
  const Grid& g = r.grid;
  if (rank == 1) {
    VecField X(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const LorentzVec x = minkowski_cross({real_part(r.frame.Y[k]), real_part(r.frame.Yz[k]),
                                            imag_part(r.frame.Yz[k]), real_part(r.frame.N[k])});
      const Real len2 = lorentz_dot(x, x);
      X[k] = len2 > 1e-300 ? complexify(x) / std::sqrt(len2) : ComplexLorentzVec(dim);
    }
    return {X};
  }
  std::vector<VecField> parts;
  for (int a = 0; a < dim; ++a) {
    VecField w(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const ComplexLorentzVec e = ComplexLorentzVec::basis(dim, a);
      w[k] = complexify(real_part(e - project_tangent(e, r.frame, k)));
    }
    parts.push_back(std::move(w));
  }

  auto gram_det = [&](const std::vector<int>& axes, std::size_t k) {
    const Real aa = hermitian_sq(parts[axes[0]][k]);
    const Real bb = hermitian_sq(parts[axes[1]][k]);
    const Real ab = lorentz_dot(parts[axes[0]][k], parts[axes[1]][k]).real();
    return aa * bb - ab * ab;
  };
  std::vector<std::vector<int>> choices;
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) choices.push_back({a, b});
  }
  std::vector<int> best;
  Real best_score = -1;
  for (const auto& axes : choices) {
    Real worst = std::numeric_limits<Real>::infinity();
    for (int j = 0; j < g.nv; ++j)
      for (int i = 0; i < g.nu; ++i)
        if (r.usable(i, j)) worst = std::min(worst, gram_det(axes, g.index(i, j)));
    if (worst > best_score) {
      best_score = worst;
      best = axes;
    }
  }

  std::vector<VecField> basis;
  for (int axis : best) {
    VecField xi = parts[axis];
    for (std::size_t k = 0; k < g.size(); ++k) {
      for (const VecField& prev : basis) xi[k] -= lorentz_dot(xi[k], prev[k]) * prev[k];
      const Real len2 = hermitian_sq(xi[k]);
      xi[k] = len2 > 1e-30 ? xi[k] / std::sqrt(len2) : ComplexLorentzVec(dim);
    }
    basis.push_back(std::move(xi));
  }
  return basis;
}

ResidualReport structure_residuals(const PipelineResult& r, Real tol) {
  const Grid& g = r.grid;
  const FrameField& fr = r.frame;
  const InvariantField& inv = r.inv;
  const VecField Nz = d_z(fr.N, g);
  RealField l1(g), l2(g), l3(g), l4(g, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Real kk = hermitian_sq(inv.kappa[k]);
    l1[k] = euclid_norm(fr.Yzz[k] + (inv.s[k] / Real(2)) * fr.Y[k] - inv.kappa[k]);
    l2[k] = euclid_norm(fr.Yzzb[k] + kk * fr.Y[k] - Real(0.5) * fr.N[k]);
    l3[k] = euclid_norm(Nz[k] + Real(2) * kk * fr.Yz[k] + inv.s[k] * fr.Yzb[k] - Real(2) * inv.Dkappa.Dzb[k]);
  }
  for (const VecField& xi : normal_basis(r)) {
    const VecField xz = d_z(xi, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const ComplexLorentzVec res = project_tangent(xz[k], fr, k) -
                                    Real(2) * lorentz_dot(xi[k], inv.Dkappa.Dzb[k]) * fr.Y[k] +
                                    Real(2) * lorentz_dot(xi[k], inv.kappa[k]) * fr.Yzb[k];
      l4[k] = std::max(l4[k], euclid_norm(res));
    }
  }
  RealField gram(g), normal(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex dev[] = {lorentz_dot(fr.Y[k], fr.Y[k]),         lorentz_dot(fr.N[k], fr.N[k]),
                           lorentz_dot(fr.Y[k], fr.N[k]) + Real(1),    lorentz_dot(fr.N[k], fr.Yz[k]),
                           lorentz_dot(fr.Yz[k], fr.Yz[k]),        lorentz_dot(fr.Yz[k], fr.Yzb[k]) - Real(0.5)};
    gram[k] = 0;
    for (const Complex& d : dev) gram[k] = std::max(gram[k], std::abs(d));
    normal[k] = euclid_norm(project_tangent(inv.kappa[k], fr, k)) / euclid_norm(inv.kappa[k]);
  }
  ResidualReport rep = base_report(r);
  rep.add("frame.gram", "<Y,Y> = <N,N> = <N,Y_z> = <Y_z,Y_z> = 0, <Y,N> = -1, <Y_z,Y_zbar> = 1/2", stats_of(r, gram),
          tol);
  rep.add("frame.kappa_normal", "kappa orthogonal to Y, N, Y_z, Y_zbar", stats_of(r, normal), tol,
          "relative to |kappa|");
  rep.add("structure.hopf", "Y_zz + (s/2) Y = kappa", stats_of(r, l1), tol);
  rep.add("structure.laplace", "Y_zzbar = -<kappa,conj(kappa)> Y + N/2", stats_of(r, l2), tol);
  rep.add("structure.normal", "N_z = -2<kappa,conj(kappa)> Y_z - s Y_zbar + 2 D_zbar kappa", stats_of(r, l3), tol);
  rep.add("structure.normal_bundle", "xi_z = D_z xi + 2<xi,D_zbar kappa> Y - 2<xi,kappa> Y_zbar", stats_of(r, l4), tol);
  return rep;
}

ResidualReport integrability_residuals(const PipelineResult& r, Real tol) {
  const VecField& kappa = r.inv.kappa;
  const VecField w = willmore_vector(r, kappa, r.inv.Dkappa);
  RealField codazzi(r.grid);
  for (std::size_t k = 0; k < codazzi.size(); ++k) codazzi[k] = euclid_norm(imag_part(w[k]));

  ResidualReport rep = base_report(r);
  rep.add("integrability.gauss", kGaussLabel, stats_of(r, gauss_field(r, kappa, r.inv.Dkappa)), tol);
  rep.add("integrability.codazzi", "Im(D_zbar D_zbar kappa + (conj(s)/2) kappa) = 0", stats_of(r, codazzi), tol);
  const std::string note = r.n == 3 ? "rank-1 normal bundle: both sides vanish identically" : "";
  rep.add("integrability.ricci", kRicciLabel, stats_of(r, ricci_field(r, normal_basis(r), kappa)), tol, note);
  return rep;
}

RealField willmore_field(const PipelineResult& r) {
  return relative_norm(willmore_vector(r, r.inv.kappa, r.inv.Dkappa), r.inv.kappa);
}

ResidualReport willmore_residual(const PipelineResult& r, Real tol) {
  ResidualReport rep = base_report(r);
  rep.add("willmore", kWillmoreLabel, stats_of(r, willmore_field(r)), tol, "relative to |kappa|");
  return rep;
}

ResidualReport swillmore_checks(const PipelineResult& r, Real tol) {
  const Grid& g = r.grid;
  const InvariantField& inv = r.inv;
  const ScalarField mu_z = d_z(inv.mu, g);
  const ScalarField rho_zb = d_zbar(inv.rho, g);
  RealField mu_eq(g), rho_eq(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    mu_eq[k] = std::abs(mu_z[k] - inv.mu[k] * inv.mu[k] / Real(2) - inv.s[k]);
    rho_eq[k] = std::abs(rho_zb[k] - inv.mubar[k] * inv.rho[k]);
  }
  ResidualReport rep = base_report(r);
  const FieldStats defect = stats_of(r, inv.sres_swillmore);
  rep.add("swillmore.defect", "D_zbar kappa + (conj(mu)/2) kappa = 0", defect, tol, "relative to |kappa|");
  rep.add("swillmore.mu", "mu_z - mu^2/2 - s = 0", stats_of(r, mu_eq), tol);
  rep.add("swillmore.rho", "rho_zbar = conj(mu) rho", stats_of(r, rho_eq), tol);

  const char* theta_label = "d_zbar(rho <kappa,kappa>) = 0";
  if (max_isotropy(r) < 1e-6) {
    rep.add_trivial("swillmore.theta", theta_label, tol, "isotropic: Theta vanishes identically");
  } else {
    const ScalarField th_zb = d_zbar(inv.Theta, g);
    rep.add("swillmore.theta", theta_label, usable_stats(r, [&](std::size_t k) { return std::abs(th_zb[k]); }), tol);
  }

  try {
    const DualSurface d = dual_surface(r, std::max(tol, Real(1e-5)));
    rep.add("dual.derivative", "Yhat_z = (mu/2) Yhat + rho (Y_z + (mu/2) Y)", stats_of(r, d.res_derivative), tol);
    rep.add("dual.isotropic", "<Yhat_z, Yhat_z> = 0", stats_of(r, d.res_isotropic), tol);
    rep.add("dual.metric", "<Yhat_z, conj(Yhat_z)> = |rho|^2 / 2", stats_of(r, d.res_metric), tol);
    rep.add("dual.null", "<Yhat, Yhat> = 0", stats_of(r, d.res_null), tol);
  } catch (const GeometryError& e) {
    rep.add("dual.defined", "dual surface requires D_zbar kappa parallel to kappa", defect, std::max(tol, Real(1e-5)),
            e.what());
  }
  return rep;
}

ScalarField laplacian_log(const ScalarField& P, const RealField& omega, const Grid& g) {
  const ScalarField Pz = d_z(P, g);
  ScalarField q(g);
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = P[k] != Complex(0) ? Pz[k] / P[k] : Complex(0);
  const ScalarField qzb = d_zbar(q, g);
  ScalarField out(g);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 4 * std::exp(-2 * omega[k]) * qzb[k];
  return out;
}

ResidualReport lemmaP_residuals(const PipelineResult& r, Real tol) {
  const InvariantField& inv = r.inv;
  const Real floor = 1e-8;
  const bool vacuous = max_abs_P(r) < 100 * tol;
  const auto nonzero = [&](std::size_t k) { return std::abs(inv.P[k]) >= floor; };
  const auto all = [](std::size_t) { return true; };
  ScalarField L;
  if (!vacuous) L = laplacian_log(inv.P, inv.omega, r.grid);
  const std::string vacuous_note = "P vanishes identically: Laplacian identities are vacuous";

  ResidualReport rep = base_report(r);
  if (r.n == 3) {
    rep.add("lemmaP.P1", "Re P = 2(K - 1)",
            stats_where(r, all, [&](std::size_t k) { return inv.P[k].real() - 2 * (inv.K[k] - 1); }), tol);
    if (vacuous) {
      rep.add_trivial("lemmaP.P3", "Laplacian log|P| = 4K", tol, vacuous_note);
      rep.add_trivial("lemmaP.P4", "Laplacian psi = Im P", tol, vacuous_note);
    } else {
      rep.add("lemmaP.P3", "Laplacian log|P| = 4K",
              stats_where(r, nonzero, [&](std::size_t k) { return L[k].real() - 4 * inv.K[k]; }), tol);
      rep.add("lemmaP.P4", "Laplacian psi = Im P",
              stats_where(r, nonzero, [&](std::size_t k) { return L[k].imag() - inv.P[k].imag(); }), tol);
    }
    return rep;
  }

  const FieldStats iso = usable_stats(r, [&](std::size_t k) { return std::abs(lorentz_dot(inv.kappa[k], inv.kappa[k])); });
  rep.add("lemmaP.isotropy", "<kappa, kappa> = 0", iso, 1e-6);
  if (!(iso.max < 1e-6)) {
    rep.notes.push_back("surface is not isotropic; the S^4 identities for P do not apply");
    return rep;
  }
  rep.add("lemmaP.P5", "K = Re P / 2 + 2",
          stats_where(r, all, [&](std::size_t k) { return inv.K[k] - (inv.P[k].real() / 2 + 2); }), tol);
  if (vacuous) {
    rep.add_trivial("lemmaP.P6", "Laplacian log|P| = 4K - 2", tol, vacuous_note);
    rep.add_trivial("lemmaP.P7", "Laplacian psi = Im P", tol, vacuous_note);
  } else {
    rep.add("lemmaP.P6", "Laplacian log|P| = 4K - 2",
            stats_where(r, nonzero, [&](std::size_t k) { return L[k].real() - (4 * inv.K[k] - 2); }), tol);
    rep.add("lemmaP.P7", "Laplacian psi = Im P",
            stats_where(r, nonzero, [&](std::size_t k) { return L[k].imag() - inv.P[k].imag(); }), tol);
  }
  return rep;
}

RealField aux_curvature(const ScalarField& P, const RealField& omega, const Grid& g) {
  RealField wt(g);
  for (std::size_t k = 0; k < wt.size(); ++k) wt[k] = 0.25 * std::log(std::max(std::abs(P[k]), Real(1e-300))) + omega[k];
  const ScalarField lap = laplacian_conformal(to_complex(wt), wt, g);
  RealField out(g);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -lap[k].real();
  return out;
}

ResidualReport aux_flat_metric(const PipelineResult& r, Real tol) {
  ResidualReport rep = base_report(r);
  const char* label = "curvature of sqrt|P| e^{2w} |dz|^2 = 0";
  if (r.n != 3) {
    rep.add_trivial("auxmetric.flat", label, tol, "inapplicable: defined for surfaces in S^3");
    return rep;
  }
  if (max_abs_P(r) < 100 * tol) {
    rep.add_trivial("auxmetric.flat", label, tol, "inapplicable: P vanishes identically");
    return rep;
  }
  const RealField kt = aux_curvature(r.inv.P, r.inv.omega, r.grid);
  rep.add("auxmetric.flat", label,
          stats_where(r, [&](std::size_t k) { return std::abs(r.inv.P[k]) >= 1e-8; }, [&](std::size_t k) { return kt[k]; }),
          tol);
  return rep;
}

ResidualReport associated_family_check(const PipelineResult& r, Real t, Real tol) {
  Real c = std::cos(t), s = std::sin(t);
  // Snap rounding-level components so that t = 0 and t = pi rotate exactly.
  if (std::abs(c) < 1e-15) c = 0;
  if (std::abs(s) < 1e-15) s = 0;
  const Complex rot(c, s);
  const bool exact = s == 0;

  const Grid& g = r.grid;
  VecField kt(g);
  for (std::size_t k = 0; k < g.size(); ++k) kt[k] = rot * r.inv.kappa[k];
  const NormalDerivative dt = normal_connection(kt, r.frame, g, r.mask, r.margin, false);
  RealField kk(g);
  for (std::size_t k = 0; k < g.size(); ++k) kk[k] = std::max(hermitian_sq(kt[k]), r.inv.kk_floor);
  const MuRhoP mt = mu_rho_P(kt, dt, kk, g, r.mask);

  const std::vector<VecField> basis = normal_basis(r);
  const RealField gauss0 = gauss_field(r, r.inv.kappa, r.inv.Dkappa), gausst = gauss_field(r, kt, dt);
  const RealField will0 = willmore_field(r), willt = relative_norm(willmore_vector(r, kt, dt), kt);
  const RealField ric0 = ricci_field(r, basis, r.inv.kappa), rict = ricci_field(r, basis, kt);

  char tag[32];
  std::snprintf(tag, sizeof tag, "@t=%.6f", static_cast<double>(t));
  const std::string sfx(tag);
  ResidualReport rep = base_report(r);
  rep.add("assoc.gauss" + sfx, kGaussLabel, stats_of(r, gausst), tol);
  rep.add("assoc.willmore" + sfx, kWillmoreLabel, stats_of(r, willt), tol, "relative to |kappa|");
  rep.add("assoc.ricci" + sfx, kRicciLabel, stats_of(r, rict), tol);
  const Real same = 1e-9;
  rep.add("assoc.gauss_change" + sfx, "gauss residual unchanged by kappa -> e^{it} kappa",
          usable_stats(r, [&](std::size_t k) { return gausst[k] - gauss0[k]; }), same);
  rep.add("assoc.willmore_change" + sfx, "willmore residual unchanged by kappa -> e^{it} kappa",
          usable_stats(r, [&](std::size_t k) { return willt[k] - will0[k]; }), same);
  rep.add("assoc.ricci_change" + sfx, "ricci residual unchanged by kappa -> e^{it} kappa",
          usable_stats(r, [&](std::size_t k) { return rict[k] - ric0[k]; }), same);
  rep.add("assoc.P_change" + sfx, "P unchanged by kappa -> e^{it} kappa",
          usable_stats(r, [&](std::size_t k) { return std::abs(mt.P[k] - r.inv.P[k]); }), same);
  std::size_t differing = 0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (!(mt.P[k] == r.inv.P[k])) ++differing;
  if (exact) {
    FieldStats bits;
    bits.max = static_cast<Real>(differing);
    bits.count = g.size();
    rep.add("assoc.P_bitwise" + sfx, "P bitwise identical (nodes differing)", bits, 0);
  } else {
    rep.notes.push_back("t=" + fmt("%.6f", t) + ": " + std::to_string(differing) +
                        " nodes of P differ in the last bits (e^{it} is not exactly representable)");
  }
  return rep;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::MinimalR3: return "MinimalR3";
    case Verdict::CliffordClass: return "CliffordClass";
    case Verdict::ComplexCurve: return "ComplexCurve";
    case Verdict::VeroneseClass: return "VeroneseClass";
    case Verdict::NonConstantK: return "NonConstantK";
    case Verdict::NotWillmore: return "NotWillmore";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

Classification classify(const PipelineResult& r, Real tol) {
  Classification c;
  Real sum = 0;
  std::size_t n = 0;
  for (int j = 0; j < r.grid.nv; ++j)
    for (int i = 0; i < r.grid.nu; ++i)
      if (r.usable(i, j)) {
        sum += r.inv.K(i, j);
        ++n;
      }
  c.K_mean = n ? sum / static_cast<Real>(n) : 0;
  c.K_spread = usable_stats(r, [&](std::size_t k) { return r.inv.K[k] - c.K_mean; }).max;
  c.P_max_abs = max_abs_P(r);
  c.isotropy = max_isotropy(r);
  c.willmore = stats_of(r, willmore_field(r)).max;

  const Real ktol = 10 * tol, ptol = 100 * tol, itol = 1e-6;
  if (!(c.willmore <= tol)) {
    c.verdict = Verdict::NotWillmore;
    c.reasons.push_back(fmt("willmore residual %.3e > %.3e", c.willmore, tol));
    return c;
  }
  c.reasons.push_back(fmt("willmore residual %.3e <= %.3e", c.willmore, tol));

  auto K_dev = [&](Real K0) { return usable_stats(r, [&](std::size_t k) { return r.inv.K[k] - K0; }).max; };
  auto P_dev = [&](Complex P0) { return usable_stats(r, [&](std::size_t k) { return std::abs(r.inv.P[k] - P0); }).max; };
  struct Candidate {
    Verdict v;
    Real K0;
    Complex P0;
    bool isotropic;
  };
  const Candidate candidates[] = {
      {Verdict::MinimalR3, 1, 0, false},
      {Verdict::CliffordClass, 0, -2, false},
      {Verdict::ComplexCurve, 2, 0, true},
      {Verdict::VeroneseClass, 0.5, -3, true},
  };
  for (const Candidate& cand : candidates) {
    const Real dk = K_dev(cand.K0), dp = P_dev(cand.P0);
    if (!(dk < ktol) || !(dp < ptol)) continue;
    if (cand.isotropic && !(c.isotropy < itol)) continue;
    c.verdict = cand.v;
    c.reasons.push_back(fmt("max|K - %g| = %.3e", cand.K0, dk) + fmt(" < %.3e", ktol));
    c.reasons.push_back(fmt("max|P - (%g)| = %.3e", cand.P0.real(), dp) + fmt(" < %.3e", ptol));
    if (cand.isotropic) c.reasons.push_back(fmt("max|<kappa,kappa>| = %.3e < %.0e", c.isotropy, itol));
    return c;
  }
  if (c.K_spread >= ktol) {
    c.verdict = Verdict::NonConstantK;
    c.reasons.push_back(fmt("max|K - mean K| = %.3e >= %.3e", c.K_spread, ktol));
  } else {
    c.verdict = Verdict::Indeterminate;
    c.reasons.push_back(fmt("K = %.6g constant within %.3e", c.K_mean, ktol) +
                        fmt(" but no class matches (max|P| = %.3e)", c.P_max_abs));
  }
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"structure", "integrability", "willmore", "swillmore",
                                                 "lemmaP",    "auxmetric",     "associated", "all"};
  return names;
}

ResidualReport run_suite(const std::string& suite, const PipelineResult& r, Real tol) {
  if (suite == "structure") return structure_residuals(r, tol);
  if (suite == "integrability") return integrability_residuals(r, tol);
  if (suite == "willmore") return willmore_residual(r, tol);
  if (suite == "swillmore") return swillmore_checks(r, tol);
  if (suite == "lemmaP") return lemmaP_residuals(r, tol);
  if (suite == "auxmetric") return aux_flat_metric(r, tol);
  if (suite == "associated") {
    ResidualReport rep = base_report(r);
    for (Real t : {std::numbers::pi_v<Real> / 6, std::numbers::pi_v<Real> / 3, std::numbers::pi_v<Real>})
      rep.merge(associated_family_check(r, t, tol));
    return rep;
  }
  if (suite == "all") {
    ResidualReport rep = base_report(r);
    for (const std::string& name : suite_names())
      if (name != "all") rep.merge(run_suite(name, r, tol));
    return rep;
  }
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

std::string node_csv(const PipelineResult& r) {
  const RealField will = willmore_field(r);
  std::ostringstream out;
  out << "u,v,K,ReP,ImP,psi,willmore_res,swillmore_defect,omega,usable\n";
  char buf[512];
  const Grid& g = r.grid;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      if (!g.is_core(i, j)) continue;
      const std::size_t k = g.index(i, j);
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%d\n", round12(g.u(i)), round12(g.v(j)),
                    round12(r.inv.K[k]), round12(r.inv.P[k].real()), round12(r.inv.P[k].imag()), round12(r.inv.psi[k]),
                    round12(will[k]), round12(r.inv.sres_swillmore[k]), round12(r.inv.omega[k]), r.usable(i, j) ? 1 : 0);
      out << buf;
    }
  return out.str();
}

}  // namespace mobius
