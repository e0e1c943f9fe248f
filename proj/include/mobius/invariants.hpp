#pragma once
/**
 * @file invariants.hpp
 * @brief Moebius-invariant pipeline for a conformally parametrized surface in
 * S^3 / S^4: canonical lift, frame {Y, Y_z, Y_zbar, N}, Schwarzian s, Hopf
 * differential kappa, Moebius metric e^{2w} = 4<kappa, conj kappa>, Moebius
 * curvature K, normal connection D, mu, rho, P, psi, Theta, dual surface,
 * Willmore functional, and the Euclidean shape quantities of R^3 surfaces.
 *
 * Pairings are the complex-bilinear Minkowski form; Hermitian quantities are
 * always spelled with an explicit conjugate, e.g. kk = <kappa, conj(kappa)>.
 *
 * Every derivative goes through d_z / d_zbar of diffgrid. Non-periodic axes
 * are padded with ghost nodes sampled from the closed-form surface so that
 * the one-sided boundary stencils never reach the reported nodes.
 */

#include <functional>
#include <string>
#include <vector>

#include "mobius/diffgrid.hpp"
#include "mobius/minkowski.hpp"
#include "mobius/surface.hpp"

namespace mobius {

struct PipelineOptions {
  /// Ghost nodes added on each side of every non-periodic axis.
  int ghost = 24;
  /// Core nodes excluded next to non-periodic edges in statistics.
  int margin = 3;
  /// Umbilic mask: e^{2w} < max(umbilic_rel * median, umbilic_abs).
  Real umbilic_rel = 1e-6;
  Real umbilic_abs = 1e-10;
  /// Immersion mask: <F_z, conj F_z> <= immersion_floor.
  Real immersion_floor = 1e-8;
  /// Nodes within this distance of a masked node are masked as well (the
  /// derivative chain spreads a bad value by three nodes per level).
  int dilate = 21;
  /// |P| below this leaves psi undefined at the node.
  Real psi_floor = 1e-8;
  /// Rescale the lift to the conformal barycenter gauge before differentiating.
  bool center = true;
};

/// Light-cone lift F of a surface sampled on a (possibly padded) grid.
struct LiftField {
  Grid grid;
  VecField F;
  /// The surface lives in S^n, n = 3 or 4.
  int n = 3;
};

/// Samples (1, f(u, v)) on `core` padded by `ghost` nodes.
LiftField sample_lift(const SurfaceSpec& spec, const Grid& core, int ghost);
LiftField sample_lift(const std::function<std::vector<Real>(Real, Real)>& point, int n, const Grid& core, int ghost);

/// Applies M to every lift vector and renormalizes to F_0 = 1 (the lift of
/// the transformed surface).
LiftField transform_lift(const LiftField& lift, const LorentzTransform& m);

/**
 * Unit future timelike T with sum over core nodes of F / (-<F, T>) parallel
 * to T, found by fixed-point iteration. Equivariant: the barycenter of M F is
 * M T. Throws GeometryError when the iteration does not settle (e.g. most of
 * the mass sits on a single point).
 */
LorentzVec conformal_barycenter(const LiftField& lift);

/// Rescales every lift vector to F / (-<F, T>) with T the conformal barycenter.
LiftField center_lift(const LiftField& lift);

struct FrameField {
  VecField Y, Yz, Yzb, N;
  /// Second derivatives kept for the structure equations.
  VecField Yzz, Yzzb;
};

struct NormalDerivative {
  VecField Dz, Dzb;
};

struct InvariantField {
  RealField omega;
  ScalarField s;
  VecField kappa;
  RealField K;
  ScalarField mu, mubar, rho, P;
  RealField psi;
  ScalarField Theta;
  RealField sres_swillmore;
  /// <kappa, conj kappa>, clamped below at kk_floor (the umbilic threshold).
  RealField kk;
  Real kk_floor = 0;
  /// D_z kappa = lambda kappa + (rest); lambda by least squares along kappa.
  ScalarField lambda;
  NormalDerivative Dkappa;
};

struct PipelineResult {
  std::string name;
  int n = 3;
  Grid grid;
  /// 1 where the node is immersed and umbilic-free (after dilation).
  Mask mask;
  int margin = 3;
  FrameField frame;
  InvariantField inv;

  /// Node counts in statistics: unmasked and interior.
  bool usable(int i, int j) const { return mask(i, j) && grid.is_interior(i, j, margin); }
  std::size_t usable_count() const;
};

/// Y = F / sqrt(2 <F_z, conj F_z>). Nodes whose metric falls below the floor
/// are cleared in `mask` (which must match the grid).
VecField canonical_lift(const VecField& F, const Grid& g, Mask& mask, Real floor = 1e-8);
/// Canonical lift of a catalog or user surface sampled on g.
VecField canonical_lift(const SurfaceSpec& spec, const Grid& g);

/// N = 2 Y_zzbar + 2 <Y_zzbar, Y_zzbar> Y.
FrameField build_frame(const VecField& Y, const Grid& g);

struct SchwarzianHopf {
  ScalarField s;
  VecField kappa;
};
/// s = 2 <Y_zz, N>, kappa = Y_zz + (s/2) Y.
SchwarzianHopf schwarzian_hopf(const FrameField& fr, const Grid& g);

struct MetricCurvature {
  RealField omega, K, kk;
};
/// omega = log(4 <kappa, conj kappa>) / 2, K = -4 e^{-2 omega} omega_zzbar.
MetricCurvature metric_curvature(const VecField& kappa, const Grid& g);

/// Tangential (V-) component of w in the frame.
ComplexLorentzVec project_tangent(const ComplexLorentzVec& w, const FrameField& fr, std::size_t k);

/// D_z xi and D_zbar xi for a section of the complexified normal bundle.
/// With `check`, throws GeometryError if the V-component of xi exceeds
/// 1e-6 max(1, max|xi|) on the usable nodes of `mask`. The pipeline itself
/// runs unchecked and reports normality as a residual instead.
NormalDerivative normal_connection(const VecField& xi, const FrameField& fr, const Grid& g, const Mask& mask,
                                   int margin = 3, bool check = true);

struct MuRhoP {
  ScalarField mu, mubar, rho, P, Theta, lambda;
  RealField psi, sres_swillmore;
};
/// mubar = -2 <D_zbar kappa, conj kappa> / kk; rho = d_z(mubar) - 2 kk;
/// P = rho / kk; Theta = rho <kappa, kappa>; psi = unwrapped arg P.
MuRhoP mu_rho_P(const VecField& kappa, const NormalDerivative& dk, const RealField& kk, const Grid& g,
                const Mask& mask, Real psi_floor = 1e-8);

/// Phase unwrapping of arg(P) along the middle row, then outwards along every
/// column, shifted by a multiple of 2 pi so that the median lies in (-pi, pi].
/// NaN where |P| < floor or the node is masked.
RealField unwrap_phase(const ScalarField& P, const Mask& mask, Real floor);

/// Full pipeline.
PipelineResult run_pipeline(const LiftField& lift, const std::string& name, const PipelineOptions& opt = {});
PipelineResult run_pipeline(const SurfaceSpec& spec, const PipelineOptions& opt = {});
PipelineResult run_pipeline(const SurfaceSpec& spec, const Grid& core, const PipelineOptions& opt = {});

struct DualSurface {
  VecField Yhat, Yhat_z;
  /// |Yhat_z - (mu/2) Yhat - rho (Y_z + (mu/2) Y)|.
  RealField res_derivative;
  /// |<Yhat_z, Yhat_z>|.
  RealField res_isotropic;
  /// |<Yhat_z, conj Yhat_z> - |rho|^2 / 2|.
  RealField res_metric;
  /// |<Yhat, Yhat>|.
  RealField res_null;
};
/// Yhat = |mu|^2/2 Y + conj(mu) Y_z + mu Y_zbar + N. Requires the
/// S-Willmore defect below `defect_tol` on usable nodes.
DualSurface dual_surface(const PipelineResult& r, Real defect_tol = 1e-5);

/// W = 4 * integral of <kappa, conj kappa> du dv over the core nodes.
Real willmore_functional(const VecField& kappa, const Grid& g);

struct EuclideanShape {
  RealField H, K_euclid, dM;
  Real W_tilde = 0;
  /// Padded grid the fields live on.
  Grid grid;
};
/// Classical first/second fundamental forms of an R^3 surface on `core`
/// (padded internally); W~ = integral (H^2 - K) dM over the core.
EuclideanShape euclidean_shape(const SurfaceSpec& spec, const Grid& core, int ghost = 24);

/// Max / rms of a real field over the usable nodes.
struct FieldStats {
  Real max = 0, rms = 0;
  std::size_t count = 0;
};
FieldStats usable_stats(const PipelineResult& r, const std::function<Real(std::size_t)>& value);

}  // namespace mobius
