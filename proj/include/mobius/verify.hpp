#pragma once
/**
 * @file verify.hpp
 * @brief Residual suites over a completed pipeline run: structure equations,
 * Gauss/Codazzi/Ricci, the Willmore and S-Willmore conditions with the dual
 * surface, the identities tying P to K, the flat auxiliary metric
 * sqrt|P| e^{2w}|dz|^2, the associated family kappa -> e^{it} kappa, and the
 * (K, P) classifier.
 *
 * Residual statistics are taken over usable nodes only (unmasked, interior).
 */

#include <string>
#include <vector>

#include "mobius/invariants.hpp"
#include "mobius/report.hpp"

namespace mobius {

/// 1e-6 when both axes are periodic (spectral), 1e-4 otherwise.
Real default_tolerance(const Grid& g);

/// Real orthonormal frame of the normal bundle, one VecField per basis vector
/// (rank n - 2). In S^3 this is the unit normal X, the Minkowski cross product
/// of {Y, Re Y_z, Im Y_z, N}; in S^4 it is Gram-Schmidt applied to the normal
/// parts of the best conditioned pair of coordinate axes.
std::vector<VecField> normal_basis(const PipelineResult& r);

ResidualReport structure_residuals(const PipelineResult& r, Real tol);
ResidualReport integrability_residuals(const PipelineResult& r, Real tol);
ResidualReport willmore_residual(const PipelineResult& r, Real tol);
ResidualReport swillmore_checks(const PipelineResult& r, Real tol);
ResidualReport lemmaP_residuals(const PipelineResult& r, Real tol);
ResidualReport aux_flat_metric(const PipelineResult& r, Real tol);
ResidualReport associated_family_check(const PipelineResult& r, Real t, Real tol);

/// |D_zbar D_zbar kappa + (conj s / 2) kappa| / |kappa| per node.
RealField willmore_field(const PipelineResult& r);

/// Curvature of the metric sqrt|P| e^{2 omega} |dz|^2.
RealField aux_curvature(const ScalarField& P, const RealField& omega, const Grid& g);

/// Laplacian of log P computed branch-free as 4 e^{-2w} d_zbar(P_z / P):
/// the real part is the Laplacian of log|P|, the imaginary part that of arg P.
ScalarField laplacian_log(const ScalarField& P, const RealField& omega, const Grid& g);

enum class Verdict { MinimalR3, CliffordClass, ComplexCurve, VeroneseClass, NonConstantK, NotWillmore, Indeterminate };

std::string verdict_name(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  /// The inequalities that decided the verdict, as text.
  std::vector<std::string> reasons;
  Real K_mean = 0, K_spread = 0, P_max_abs = 0, isotropy = 0, willmore = 0;
};

/// Thresholds: |K - K0| < 10 tol, |P - P0| < 100 tol, isotropy < 1e-6.
Classification classify(const PipelineResult& r, Real tol);

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs one suite by name, or all of them for "all". Throws
/// std::invalid_argument for an unknown suite.
ResidualReport run_suite(const std::string& suite, const PipelineResult& r, Real tol);

/// Per-node CSV over the core nodes: u, v, K, ReP, ImP, psi, willmore_res,
/// swillmore_defect, omega, mask.
std::string node_csv(const PipelineResult& r);

}  // namespace mobius
