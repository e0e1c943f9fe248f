#include "mobius/rigid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "mobius/parallel.hpp"
#include "mobius/verify.hpp"

namespace mobius {

namespace {

const Real kSqrt2 = std::sqrt(Real(2));

FrameState axpy(const FrameState& x, Real a, const FrameState& y) {
  FrameState out = x;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += a * y[k];
  return out;
}

FrameState rk4_step(const RigidSystem& sys, const FrameState& s, Real u, Real v, Axis axis, Real h) {
  const Real du = axis == Axis::U ? h : 0, dv = axis == Axis::V ? h : 0;
  const FrameState k1 = sys.rhs(s, u, v, axis);
  const FrameState k2 = sys.rhs(axpy(s, h / 2, k1), u + du / 2, v + dv / 2, axis);
  const FrameState k3 = sys.rhs(axpy(s, h / 2, k2), u + du / 2, v + dv / 2, axis);
  const FrameState k4 = sys.rhs(axpy(s, h, k3), u + du, v + dv, axis);
  FrameState out = s;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += (h / 6) * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]);
  return out;
}

/// Integrates along `axis` from coordinate `from` through `targets` (sorted in
/// the direction of travel), recording the state at each target.
std::vector<FrameState> march(const RigidSystem& sys, FrameState s, Real fixed, Axis axis, Real from,
                              const std::vector<Real>& targets, Real h, std::size_t& steps) {
  std::vector<FrameState> out;
  Real pos = from;
  for (Real t : targets) {
    const Real len = t - pos;
    const long n = std::max(1L, static_cast<long>(std::ceil(std::abs(len) / h - 1e-9)));
    const Real step = len / static_cast<Real>(n);
    for (long k = 0; k < n; ++k) {
      const Real at = pos + static_cast<Real>(k) * step;
      s = axis == Axis::U ? rk4_step(sys, s, at, fixed, axis, step) : rk4_step(sys, s, fixed, at, axis, step);
    }
    steps += static_cast<std::size_t>(n);
    pos = t;
    out.push_back(s);
  }
  return out;
}

/// States at every node of `coords`, starting from `init` at `start`.
std::vector<FrameState> sweep_line(const RigidSystem& sys, const FrameState& init, Real fixed, Axis axis, Real start,
                                   const std::vector<Real>& coords, Real h, std::size_t& steps) {
  std::vector<Real> up, down;
  for (Real c : coords) (c >= start ? up : down).push_back(c);
  std::reverse(down.begin(), down.end());
  const auto fwd = march(sys, init, fixed, axis, start, up, h, steps);
  const auto back = march(sys, init, fixed, axis, start, down, h, steps);
  std::vector<FrameState> out(back.rbegin(), back.rend());
  out.insert(out.end(), fwd.begin(), fwd.end());
  return out;
}

std::vector<Real> gram_of(const FrameState& s) {
  const std::size_t m = s.size();
  std::vector<Real> g(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) g[a * m + b] = lorentz_dot(s[a], s[b]);
  return g;
}

std::vector<Real> clifford_gram(Real, Real) {
  // Order Y, Y_u, Y_v, N, X.
  std::vector<Real> g(25, 0);
  g[0 * 5 + 3] = g[3 * 5 + 0] = -1;
  g[1 * 5 + 1] = g[2 * 5 + 2] = g[4 * 5 + 4] = 1;
  return g;
}

std::vector<Real> veronese_gram(Real u, Real v) {
  // Order Y, Y_u, Y_v, N, Re kappa, Im kappa; |kappa_r|^2 = |kappa_i|^2 = e^{2w} / 8.
  std::vector<Real> g(36, 0);
  g[0 * 6 + 3] = g[3 * 6 + 0] = -1;
  g[1 * 6 + 1] = g[2 * 6 + 2] = 1;
  const Real q = 1 / ((1 + u * u + v * v) * (1 + u * u + v * v));
  g[4 * 6 + 4] = g[5 * 6 + 5] = q;
  return g;
}

FrameState clifford_flow(const FrameState& s, Real, Real, Axis axis) {
  const LorentzVec &Y = s[0], &Yu = s[1], &Yv = s[2], &N = s[3], &X = s[4];
  if (axis == Axis::U) return {Yu, 2 * X - 2 * Y + N, LorentzVec(Y.dim()), -2 * Yu, -2 * Yu};
  return {Yv, LorentzVec(Y.dim()), -2 * X - 2 * Y + N, -2 * Yv, 2 * Yv};
}

FrameState veronese_flow(const FrameState& s, Real u, Real v, Axis axis) {
  const LorentzVec &Y = s[0], &Yu = s[1], &Yv = s[2], &N = s[3], &kr = s[4], &ki = s[5];
  const ConformalFactor w = veronese_factor(u, v);
  const Real e = std::exp(2 * w.omega), ar = w.a.real(), ai = w.a.imag();
  const LorentzVec Yuv = -2 * ai * Y - 2 * ki;
  if (axis == Axis::U)
    return {Yu,
            (2 * ar - e / 2) * Y + 2 * kr + N,
            Yuv,
            (2 * ar - e / 2) * Yu - 2 * ai * Yv - 2 * w.wu * kr + 2 * w.wv * ki,
            w.wu * kr + 2 * w.wv * ki - (e / 4) * (w.wu * Y + Yu),
            w.wu * ki - 2 * w.wv * kr + (e / 4) * (w.wv * Y + Yv)};
  return {Yv,
          Yuv,
          (-2 * ar - e / 2) * Y - 2 * kr + N,
          -(2 * ar + e / 2) * Yv - 2 * ai * Yu + 2 * w.wu * ki + 2 * w.wv * kr,
          -2 * w.wu * ki + w.wv * kr + (e / 4) * (w.wv * Y + Yv),
          2 * w.wu * kr + w.wv * ki + (e / 4) * (w.wu * Y + Yu)};
}

std::vector<Real> axis_coords(const Grid& g, bool u) {
  std::vector<Real> c;
  const int n = u ? g.nu : g.nv;
  for (int k = 0; k < n; ++k) c.push_back(u ? g.u(k) : g.v(k));
  return c;
}

}  // namespace

RigidSystem clifford_rhs() {
  RigidSystem s;
  s.name = "clifford";
  s.dim = 5;
  s.n = 3;
  s.labels = {"Y", "Y_u", "Y_v", "N", "X"};
  s.rhs = clifford_flow;
  s.gram = clifford_gram;
  s.K = 0;
  s.P = -2;
  s.K_tol = 1e-6;
  s.P_tol = 1e-6;
  return s;
}

RigidSystem veronese_rhs() {
  RigidSystem s;
  s.name = "veronese";
  s.dim = 6;
  s.n = 4;
  s.labels = {"Y", "Y_u", "Y_v", "N", "Re kappa", "Im kappa"};
  s.rhs = veronese_flow;
  s.gram = veronese_gram;
  s.K = 0.5;
  s.P = -3;
  s.K_tol = 1e-3;
  s.P_tol = 1e-2;
  s.isotropic = true;
  return s;
}

Real clifford_period() { return std::numbers::pi_v<Real> / kSqrt2; }

FrameState clifford_closed_form(Real u, Real v) {
  const Real a = 2 * kSqrt2;
  const Real cu = std::cos(a * u), su = std::sin(a * u), cv = std::cos(a * v), sv = std::sin(a * v);
  const Real r = 1 / kSqrt2;
  const LorentzVec Y{Real(0.5), cu / a, su / a, cv / a, sv / a};
  const LorentzVec Yu{0, -su, cu, 0, 0};
  const LorentzVec Yv{0, 0, 0, -sv, cv};
  const LorentzVec N{1, -r * cu, -r * su, -r * cv, -r * sv};
  const LorentzVec X{0, -r * cu, -r * su, r * cv, r * sv};
  return {Y, Yu, Yv, N, X};
}

ConformalFactor veronese_factor(Real u, Real v) {
  const Real q = 1 + u * u + v * v;
  ConformalFactor w;
  w.omega = std::log(Real(8)) / 2 - std::log(q);
  w.wu = -2 * u / q;
  w.wv = -2 * v / q;
  w.wuu = -2 / q + 4 * u * u / (q * q);
  w.wvv = -2 / q + 4 * v * v / (q * q);
  w.wuv = 4 * u * v / (q * q);
  const Complex wz(w.wu / 2, -w.wv / 2);
  const Complex wzz(Real(0.25) * (w.wuu - w.wvv), Real(-0.5) * w.wuv);
  w.a = wz * wz - wzz;
  return w;
}

FrameState veronese_initial_frame() {
  auto e = [](int k) { return LorentzVec::basis(6, k); };
  return {Real(0.5) * (e(0) + e(1)), e(2), e(3), e(0) - e(1), e(4), e(5)};
}

Real gram_defect(const RigidSystem& sys, const FrameState& s, Real u, Real v) {
  const std::vector<Real> g = gram_of(s), want = sys.gram(u, v);
  Real worst = 0;
  for (std::size_t k = 0; k < g.size(); ++k) worst = std::max(worst, std::abs(g[k] - want[k]));
  return worst;
}

Real compatibility_residual(const RigidSystem& sys, const FrameState& s, Real u, Real v) {
  constexpr Real eps = 1e-5;
  // The flows are linear in the state, so the chain rule term is f_u(f_v(s)).
  const FrameState fu_fv = sys.rhs(sys.rhs(s, u, v, Axis::V), u, v, Axis::U);
  const FrameState fv_fu = sys.rhs(sys.rhs(s, u, v, Axis::U), u, v, Axis::V);
  const FrameState fu_p = sys.rhs(s, u, v + eps, Axis::U), fu_m = sys.rhs(s, u, v - eps, Axis::U);
  const FrameState fv_p = sys.rhs(s, u + eps, v, Axis::V), fv_m = sys.rhs(s, u - eps, v, Axis::V);
  Real worst = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const LorentzVec dv_fu = fu_fv[k] + (fu_p[k] - fu_m[k]) / (2 * eps);
    const LorentzVec du_fv = fv_fu[k] + (fv_p[k] - fv_m[k]) / (2 * eps);
    worst = std::max(worst, euclid_norm(dv_fu - du_fv));
  }
  return worst;
}

Trajectory integrate_frame(const RigidSystem& sys, const FrameState& init, Real u0, Real v0, const Grid& grid, Real h,
                           Sweep sweep) {
  if (!(h > 0)) throw std::invalid_argument("integrate_frame: step must be positive");
  if (init.size() != sys.labels.size()) throw GeometryError("integrate_frame: wrong number of frame vectors");
  for (const auto& x : init)
    if (x.dim() != sys.dim) throw GeometryError("integrate_frame: frame vector has the wrong dimension");
  const Real defect = gram_defect(sys, init, u0, v0);
  if (defect > 1e-10) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "initial frame violates the Gram constraints by %.3e", static_cast<double>(defect));
    throw GeometryError(buf);
  }

  Trajectory t;
  t.grid = grid;
  t.h = h;
  t.sweep = sweep;
  t.states.assign(grid.size(), FrameState{});
  const bool u_first = sweep == Sweep::UFirst;
  const std::vector<Real> us = axis_coords(grid, true), vs = axis_coords(grid, false);
  const std::vector<Real>& spine_coords = u_first ? us : vs;
  const std::vector<Real>& line_coords = u_first ? vs : us;
  const Axis spine_axis = u_first ? Axis::U : Axis::V, line_axis = u_first ? Axis::V : Axis::U;

  std::size_t spine_steps = 0;
  const std::vector<FrameState> spine =
      sweep_line(sys, init, u_first ? v0 : u0, spine_axis, u_first ? u0 : v0, spine_coords, h, spine_steps);

  std::vector<std::size_t> line_steps(spine.size(), 0);
  parallel_for(spine.size(), [&](std::size_t a) {
    const Real fixed = spine_coords[a];
    const std::vector<FrameState> line =
        sweep_line(sys, spine[a], fixed, line_axis, u_first ? v0 : u0, line_coords, h, line_steps[a]);
    for (std::size_t b = 0; b < line.size(); ++b) {
      const int i = static_cast<int>(u_first ? a : b), j = static_cast<int>(u_first ? b : a);
      t.states[grid.index(i, j)] = line[b];
    }
  });
  t.steps = spine_steps;
  for (std::size_t s : line_steps) t.steps += s;

  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const FrameState& s = t.states[grid.index(i, j)];
      t.gram_drift = std::max(t.gram_drift, gram_defect(sys, s, grid.u(i), grid.v(j)));
      t.compatibility = std::max(t.compatibility, compatibility_residual(sys, s, grid.u(i), grid.v(j)));
    }
  t.flagged = t.gram_drift > 1e-6;
  return t;
}

Real trajectory_distance(const Trajectory& a, const Trajectory& b, int vector) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("trajectory_distance: grids differ");
  Real worst = 0;
  for (std::size_t k = 0; k < a.states.size(); ++k)
    for (std::size_t m = 0; m < a.states[k].size(); ++m)
      if (vector < 0 || static_cast<int>(m) == vector)
        worst = std::max(worst, euclid_norm(a.states[k][m] - b.states[k][m]));
  return worst;
}

Real clifford_closed_form_error(const Trajectory& t) {
  Real worst = 0;
  for (int j = 0; j < t.grid.nv; ++j)
    for (int i = 0; i < t.grid.nu; ++i) {
      const LorentzVec& y = t.states[t.grid.index(i, j)][0];
      worst = std::max(worst, euclid_norm(y - clifford_closed_form(t.grid.u(i), t.grid.v(j))[0]));
    }
  return worst;
}

LiftField trajectory_lift(const RigidSystem& sys, const Trajectory& t) {
  LiftField lift;
  lift.grid = t.grid;
  lift.n = sys.n;
  lift.F = VecField(t.grid);
  for (std::size_t k = 0; k < t.states.size(); ++k) lift.F[k] = complexify(t.states[k][0]);
  return lift;
}

ResidualReport reconstructed_invariants(const RigidSystem& sys, const Trajectory& t, const PipelineOptions& opt) {
  const PipelineResult r = run_pipeline(trajectory_lift(sys, t), sys.name + "_integrated", opt);
  ResidualReport rep;
  rep.surface = r.name;
  rep.grid = r.grid.core();
  char label[64];
  std::snprintf(label, sizeof label, "K = %g", static_cast<double>(sys.K));
  rep.add("rigid.K", label,
          usable_stats(r, [&](std::size_t k) { return std::abs(r.inv.K[k] - sys.K); }), sys.K_tol);
  std::snprintf(label, sizeof label, "P = %g", static_cast<double>(sys.P));
  rep.add("rigid.P", label,
          usable_stats(r, [&](std::size_t k) { return std::abs(r.inv.P[k] - Complex(sys.P)); }), sys.P_tol);
  if (sys.isotropic)
    rep.add("rigid.isotropy", "<kappa, kappa> = 0",
            usable_stats(r, [&](std::size_t k) { return std::abs(lorentz_dot(r.inv.kappa[k], r.inv.kappa[k])); }),
            1e-6);
  const std::size_t nodes = t.states.size();
  rep.add("rigid.gram_drift", "Gram matrix of the frame preserved", FieldStats{t.gram_drift, t.gram_drift, nodes},
          1e-8);
  rep.add("rigid.compatibility", "d/dv (d/du frame) = d/du (d/dv frame)",
          FieldStats{t.compatibility, t.compatibility, nodes}, 1e-8);
  const Classification c = classify(r, default_tolerance(r.grid));
  rep.verdict = verdict_name(c.verdict);
  rep.notes = c.reasons;
  return rep;
}

std::string trajectory_csv(const RigidSystem& sys, const Trajectory& t) {
  std::ostringstream out;
  out << "u,v";
  for (int c = 0; c < sys.dim; ++c) out << ",Y" << c;
  out << ",gram_drift\n";
  char buf[64];
  for (int j = 0; j < t.grid.nv; ++j)
    for (int i = 0; i < t.grid.nu; ++i) {
      const FrameState& s = t.states[t.grid.index(i, j)];
      std::snprintf(buf, sizeof buf, "%.12g,%.12g", round12(t.grid.u(i)), round12(t.grid.v(j)));
      out << buf;
      for (int c = 0; c < sys.dim; ++c) {
        std::snprintf(buf, sizeof buf, ",%.12g", round12(s[0][c]));
        out << buf;
      }
      std::snprintf(buf, sizeof buf, ",%.12g\n", round12(gram_defect(sys, s, t.grid.u(i), t.grid.v(j))));
      out << buf;
    }
  return out.str();
}

}  // namespace mobius
