#pragma once
/**
 * @file rigid.hpp
 * @brief Moving-frame systems of the two homogeneous Willmore surfaces with
 * constant invariants, integrated by RK4 over a grid and fed back through the
 * invariant pipeline.
 *
 * Clifford torus, frame (Y, Y_u, Y_v, N, X) in R^{4,1}:
 *   Y_uu = 2X - 2Y + N,  Y_vv = -2X - 2Y + N,  Y_uv = 0,
 *   N_u = -2 Y_u,  N_v = -2 Y_v,  X_u = -2 Y_u,  X_v = 2 Y_v.
 * Veronese sphere, frame (Y, Y_u, Y_v, N, Re kappa, Im kappa) in R^{5,1},
 * with the Moebius metric e^{2w} = 8 / (1 + u^2 + v^2)^2 of curvature 1/2.
 */

#include <functional>
#include <string>
#include <vector>

#include "mobius/invariants.hpp"
#include "mobius/minkowski.hpp"
#include "mobius/report.hpp"

namespace mobius {

/// Frame vectors in a fixed order (see RigidSystem::labels).
using FrameState = std::vector<LorentzVec>;

enum class Axis { U, V };

struct RigidSystem {
  std::string name;
  /// Ambient dimension n + 2 and sphere dimension n.
  int dim = 5, n = 3;
  std::vector<std::string> labels;
  /// d/du or d/dv of the frame. Linear in the state.
  std::function<FrameState(const FrameState&, Real u, Real v, Axis)> rhs;
  /// Gram matrix the frame must have at (u, v), row-major.
  std::function<std::vector<Real>(Real u, Real v)> gram;
  /// Invariants of the generated surface and the tolerances they are checked at.
  Real K = 0, P = 0, K_tol = 0, P_tol = 0;
  bool isotropic = false;
};

RigidSystem clifford_rhs();
RigidSystem veronese_rhs();

/// Period of the explicit Clifford lift in u and in v: pi / sqrt(2).
Real clifford_period();
/// Frame of Y = (sqrt 2, cos 2sqrt2 u, sin 2sqrt2 u, cos 2sqrt2 v, sin 2sqrt2 v) / (2 sqrt 2).
FrameState clifford_closed_form(Real u, Real v);

struct ConformalFactor {
  /// omega, its first and second partials, and a = omega_z^2 - omega_zz.
  Real omega = 0, wu = 0, wv = 0, wuu = 0, wvv = 0, wuv = 0;
  Complex a;
};
/// e^{2w} = 8 / (1 + u^2 + v^2)^2.
ConformalFactor veronese_factor(Real u, Real v);
/// A frame satisfying the Veronese Gram constraints at the origin.
FrameState veronese_initial_frame();

/// max |Gram(frame) - sys.gram(u, v)| entrywise.
Real gram_defect(const RigidSystem& sys, const FrameState& s, Real u, Real v);

/// |d/dv f_u - d/du f_v| along the flow at a state, with the coordinate
/// partials of the coefficients taken by central differences.
Real compatibility_residual(const RigidSystem& sys, const FrameState& s, Real u, Real v);

/// UFirst: spine along u through the initial point, then v-lines from each
/// spine node. VFirst: the transpose.
enum class Sweep { UFirst, VFirst };

struct Trajectory {
  Grid grid;
  /// Frame at every grid node (index = grid.index(i, j)).
  std::vector<FrameState> states;
  Real h = 0;
  Sweep sweep = Sweep::UFirst;
  /// Max Gram defect and compatibility residual over all nodes.
  Real gram_drift = 0, compatibility = 0;
  /// Gram drift above 1e-6.
  bool flagged = false;
  std::size_t steps = 0;
};

/// Classic RK4 from `init` at (u0, v0) to every node of `grid`, with at most
/// step h between consecutive nodes. No re-orthonormalization. Throws
/// GeometryError if the initial frame misses its Gram constraints by 1e-10.
Trajectory integrate_frame(const RigidSystem& sys, const FrameState& init, Real u0, Real v0, const Grid& grid, Real h,
                           Sweep sweep = Sweep::UFirst);

/// Max Euclidean distance between corresponding frame vectors; `vector` < 0
/// compares all of them.
Real trajectory_distance(const Trajectory& a, const Trajectory& b, int vector = -1);

/// Max Euclidean distance between the integrated Y and the explicit Clifford lift.
Real clifford_closed_form_error(const Trajectory& t);

/// Light-cone lift carried by the Y component.
LiftField trajectory_lift(const RigidSystem& sys, const Trajectory& t);

/// Runs the pipeline on the integrated surface and checks K, P (and isotropy
/// for the Veronese sphere) against the system's invariants, together with
/// the Gram drift and compatibility of the integration. The verdict is the
/// classifier's at the grid's default tolerance.
ResidualReport reconstructed_invariants(const RigidSystem& sys, const Trajectory& t, const PipelineOptions& opt = {});

/// u, v, Y components, gram_drift per node.
std::string trajectory_csv(const RigidSystem& sys, const Trajectory& t);

}  // namespace mobius
