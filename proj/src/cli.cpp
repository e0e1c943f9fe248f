#include "mobius/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mobius/invariants.hpp"
#include "mobius/isoparam.hpp"
#include "mobius/report.hpp"
#include "mobius/rigid.hpp"
#include "mobius/surface.hpp"
#include "mobius/verify.hpp"

namespace mobius::cli {

namespace {

using nlohmann::ordered_json;

/// Input problems that map to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SurfaceOptions {
  std::string surface;
  int nu = 0, nv = 0;
  std::uint64_t seed = 0;
  double tol = 0;
};

struct Output {
  std::string format = "text";
  std::string path;
};

std::string g12(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  return buf;
}

/// key=value pairs hashed into the report's config_hash.
class ConfigText {
 public:
  explicit ConfigText(const std::string& command) { add("command", command); }
  ConfigText& add(const std::string& k, const std::string& v) {
    items_[k] = v;
    return *this;
  }
  ConfigText& add(const std::string& k, Real v) { return add(k, g12(v)); }
  std::string hash() const {
    std::string text;
    for (const auto& [k, v] : items_) text += k + "=" + v + "\n";
    return fnv1a_hex(text);
  }

 private:
  std::map<std::string, std::string> items_;
};

void emit(const std::string& text, const Output& o, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + o.path + "'");
  f << text;
  if (!f) throw UsageError("cannot write '" + o.path + "'");
}

SurfaceSpec resolve_surface(const SurfaceOptions& so) {
  SurfaceSpec spec;
  try {
    spec = load_surface(so.surface);
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  } catch (const ParseError& e) {
    throw UsageError(std::string("surface file: ") + e.what());
  }
  if (so.nu > 0) spec.grid.nu = so.nu;
  if (so.nv > 0) spec.grid.nv = so.nv;
  try {
    spec.grid.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return spec;
}

PipelineResult compute(const SurfaceSpec& spec, std::uint64_t seed) {
  const PipelineOptions opt;
  if (seed == 0) return run_pipeline(spec, opt);
  const LiftField lift = sample_lift(spec, spec.grid, opt.ghost);
  return run_pipeline(transform_lift(lift, random_lorentz(seed, lift.n)), spec.name, opt);
}

ConfigText surface_config(const std::string& command, const SurfaceSpec& spec, const SurfaceOptions& so, Real tol) {
  ConfigText c(command);
  c.add("surface", print_surface(spec)).add("seed", std::to_string(so.seed)).add("tol", tol);
  return c;
}

ordered_json grid_json(const Grid& g) {
  return {{"u0", round12(g.u0)}, {"u1", round12(g.u1)}, {"v0", round12(g.v0)},          {"v1", round12(g.v1)},
          {"nu", g.nu},          {"nv", g.nv},          {"periodic_u", g.periodic_u}, {"periodic_v", g.periodic_v}};
}

// ---- invariants ----------------------------------------------------------

int cmd_invariants(const SurfaceOptions& so, const Output& o, std::ostream& out) {
  const SurfaceSpec spec = resolve_surface(so);
  const PipelineResult r = compute(spec, so.seed);
  if (o.format == "csv") {
    emit(node_csv(r), o, out);
    return kExitPass;
  }
  Real kmin = INFINITY, kmax = -INFINITY, ksum = 0, iso = 0;
  Complex psum = 0;
  std::size_t n = 0;
  for (int j = 0; j < r.grid.nv; ++j)
    for (int i = 0; i < r.grid.nu; ++i) {
      if (!r.usable(i, j)) continue;
      const std::size_t k = r.grid.index(i, j);
      kmin = std::min(kmin, r.inv.K[k]);
      kmax = std::max(kmax, r.inv.K[k]);
      ksum += r.inv.K[k];
      psum += r.inv.P[k];
      iso = std::max(iso, std::abs(lorentz_dot(r.inv.kappa[k], r.inv.kappa[k])));
      ++n;
    }
  const Real kmean = ksum / n;
  const Complex pmean = psum / Real(n);
  Real pdev = 0;
  for (int j = 0; j < r.grid.nv; ++j)
    for (int i = 0; i < r.grid.nu; ++i)
      if (r.usable(i, j)) pdev = std::max(pdev, std::abs(r.inv.P[r.grid.index(i, j)] - pmean));
  const Real W = willmore_functional(r.inv.kappa, r.grid);
  const std::string hash = surface_config("invariants", spec, so, 0).hash();

  if (o.format == "json") {
    ordered_json j;
    j["surface"] = spec.name;
    j["grid"] = grid_json(r.grid.core());
    j["config_hash"] = hash;
    j["usable_nodes"] = n;
    j["K"] = {{"mean", round12(kmean)}, {"min", round12(kmin)}, {"max", round12(kmax)}};
    j["P"] = {{"mean_re", round12(pmean.real())}, {"mean_im", round12(pmean.imag())}, {"max_dev", round12(pdev)}};
    j["isotropy_max"] = round12(iso);
    j["willmore_functional"] = round12(W);
    emit(j.dump(2) + "\n", o, out);
    return kExitPass;
  }
  std::ostringstream t;
  t << "surface " << spec.name << "  grid " << r.grid.core().nu << "x" << r.grid.core().nv << "  config " << hash
    << "\n";
  t << "  usable nodes        " << n << "\n";
  t << "  K mean/min/max      " << g12(kmean) << " " << g12(kmin) << " " << g12(kmax) << "\n";
  t << "  P mean              " << g12(pmean.real()) << (pmean.imag() < 0 ? " - " : " + ")
    << g12(std::abs(pmean.imag())) << "i  (max deviation " << g12(pdev) << ")\n";
  t << "  max |<kappa,kappa>| " << g12(iso) << "\n";
  t << "  Willmore functional " << g12(W) << "\n";
  emit(t.str(), o, out);
  return kExitPass;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const SurfaceOptions& so, const std::string& suite, const Output& o, const std::string& csv_path,
               std::ostream& out, std::ostream& err) {
  const SurfaceSpec spec = resolve_surface(so);
  const PipelineResult r = compute(spec, so.seed);
  const Real tol = so.tol > 0 ? Real(so.tol) : default_tolerance(spec.grid);
  ResidualReport rep;
  try {
    rep = run_suite(suite, r, tol);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  rep.surface = spec.name;
  rep.config_hash = surface_config("verify", spec, so, tol).add("suite", suite).hash();
  if (suite == "all") {
    const Classification c = classify(r, tol);
    rep.verdict = verdict_name(c.verdict);
    if (spec.expect_K)
      rep.add("expect.K", "K = " + g12(*spec.expect_K),
              usable_stats(r, [&](std::size_t k) { return std::abs(r.inv.K[k] - *spec.expect_K); }), 10 * tol);
    if (spec.expect_P)
      rep.add("expect.P", "P = " + g12(*spec.expect_P),
              usable_stats(r, [&](std::size_t k) { return std::abs(r.inv.P[k] - Complex(*spec.expect_P)); }),
              100 * tol);
  }
  if (!csv_path.empty()) emit(node_csv(r), Output{"csv", csv_path}, out);
  if (o.format == "csv")
    emit(node_csv(r), o, out);
  else
    emit(o.format == "json" ? to_json(rep) : to_text(rep), o, out);
  if (rep.passed()) return kExitPass;
  err << "failing checks:";
  for (const auto& name : rep.failing()) err << " " << name;
  err << "\n";
  return kExitFail;
}

// ---- classify -------------------------------------------------------------

int cmd_classify(const SurfaceOptions& so, const Output& o, std::ostream& out) {
  const SurfaceSpec spec = resolve_surface(so);
  const PipelineResult r = compute(spec, so.seed);
  const Real tol = so.tol > 0 ? Real(so.tol) : default_tolerance(spec.grid);
  const Classification c = classify(r, tol);
  const std::string hash = surface_config("classify", spec, so, tol).hash();
  if (o.format == "json") {
    ordered_json j;
    j["surface"] = spec.name;
    j["config_hash"] = hash;
    j["verdict"] = verdict_name(c.verdict);
    j["K_mean"] = round12(c.K_mean);
    j["K_spread"] = round12(c.K_spread);
    j["P_max_abs"] = round12(c.P_max_abs);
    j["isotropy"] = round12(c.isotropy);
    j["willmore"] = round12(c.willmore);
    j["reasons"] = c.reasons;
    emit(j.dump(2) + "\n", o, out);
  } else {
    std::ostringstream t;
    t << "surface " << spec.name << "  config " << hash << "\n";
    for (const auto& reason : c.reasons) t << "  " << reason << "\n";
    t << "verdict: " << verdict_name(c.verdict) << "\n";
    emit(t.str(), o, out);
  }
  return c.verdict == Verdict::Indeterminate ? kExitFail : kExitPass;
}

// ---- obstruction ----------------------------------------------------------

int cmd_obstruction(const std::string& space_name, const Output& o, std::ostream& out) {
  const iso::Space space = space_name == "s3" ? iso::Space::S3 : iso::Space::S4;
  const iso::Obstruction ob = iso::reduce_obstruction(space);
  const std::vector<iso::RatPoly> coeffs = ob.in_cos_squared();
  const iso::ObstructionVerdict v = iso::obstruction_verdict(coeffs);
  const std::string hash = ConfigText("obstruction").add("space", space_name).hash();

  if (o.format == "json") {
    ordered_json j;
    j["space"] = space_name;
    j["config_hash"] = hash;
    j["cleared_cos_power"] = ob.cleared_power;
    ordered_json cs = ordered_json::array();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      ordered_json c;
      c["power_of_cos_squared"] = k;
      std::vector<std::string> qs;
      for (const auto& q : coeffs[k].coeffs()) qs.push_back(q.get_str());
      c["coefficients_low_to_high"] = qs;
      c["text"] = iso::to_string(coeffs[k]);
      c["factored"] = iso::factored(coeffs[k]);
      std::vector<std::string> rs;
      for (const auto& x : v.root_sets[k].roots) rs.push_back(x.str());
      c["roots"] = rs;
      cs.push_back(std::move(c));
    }
    j["coefficients"] = std::move(cs);
    std::vector<std::string> common;
    for (const auto& x : v.intersection.roots) common.push_back(x.str());
    j["common_roots"] = common;
    j["no_admissible_K"] = v.no_admissible_K;
    emit(j.dump(2) + "\n", o, out);
  } else {
    std::ostringstream t;
    t << "space " << (space == iso::Space::S3 ? "S3" : "S4") << "  config " << hash << "\n";
    t << "obstruction: sum_k c_k(K) cos^(2k)(psi) = 0, cleared by cos^" << ob.cleared_power << "(psi)\n";
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      t << "c" << k << " = " << iso::to_string(coeffs[k]) << " = " << iso::factored(coeffs[k]) << "\n";
    for (std::size_t k = 0; k < coeffs.size(); ++k) t << "roots(c" << k << ") = " << v.root_sets[k].str() << "\n";
    t << "common roots = " << v.intersection.str() << "\n";
    t << (v.no_admissible_K ? "no admissible constant K" : "an admissible constant K exists") << "\n";
    emit(t.str(), o, out);
  }
  return v.no_admissible_K ? kExitPass : kExitFail;
}

// ---- integrate -------------------------------------------------------------

int cmd_integrate(const std::string& system, double h, int n, const std::string& sweep_name, const Output& o,
                  std::ostream& out) {
  const bool clifford = system == "clifford";
  const RigidSystem sys = clifford ? clifford_rhs() : veronese_rhs();
  const Sweep sweep = sweep_name == "vu" ? Sweep::VFirst : Sweep::UFirst;
  if (!(h > 0)) throw UsageError("--step must be positive");
  const PipelineOptions opt;
  Grid grid;
  if (clifford) {
    const Real L = clifford_period();
    grid = Grid{0, L, 0, L, n > 0 ? n : 64, n > 0 ? n : 64, true, true};
  } else {
    const int m = n > 0 ? n : 96;
    grid = Grid{-1.5, 1.5, -1.5, 1.5, m, m, false, false}.padded(opt.ghost);
  }
  try {
    grid.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const FrameState init = clifford ? clifford_closed_form(0, 0) : veronese_initial_frame();
  const Trajectory t = integrate_frame(sys, init, 0, 0, grid, h, sweep);
  if (o.format == "csv") {
    emit(trajectory_csv(sys, t), o, out);
    return t.flagged ? kExitFail : kExitPass;
  }
  ResidualReport rep = reconstructed_invariants(sys, t, opt);
  if (clifford) {
    const Real e = clifford_closed_form_error(t);
    rep.add("rigid.closed_form", "Y = explicit Clifford lift", FieldStats{e, e, t.states.size()}, 1e-6);
  }
  if (t.flagged) rep.notes.push_back("Gram drift above 1e-6");
  rep.config_hash = ConfigText("integrate")
                        .add("system", system)
                        .add("h", Real(h))
                        .add("n", std::to_string(grid.nu))
                        .add("sweep", sweep_name)
                        .hash();
  emit(o.format == "json" ? to_json(rep) : to_text(rep), o, out);
  return rep.passed() ? kExitPass : kExitFail;
}

// ---- catalog ----------------------------------------------------------------

int cmd_catalog(const Output& o, std::ostream& out) {
  if (o.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& s : catalog()) {
      ordered_json e;
      e["name"] = s.name;
      e["target"] = std::string(target_name(s.target));
      e["grid"] = grid_json(s.grid);
      if (s.expect_K) e["expect_K"] = round12(*s.expect_K);
      if (s.expect_P) e["expect_P"] = round12(*s.expect_P);
      arr.push_back(std::move(e));
    }
    emit(arr.dump(2) + "\n", o, out);
    return kExitPass;
  }
  std::ostringstream t;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-18s %-6s %-9s %-8s %-8s\n", "name", "target", "grid", "K", "P");
  t << buf;
  for (const auto& s : catalog()) {
    const std::string grid = std::to_string(s.grid.nu) + "x" + std::to_string(s.grid.nv);
    std::snprintf(buf, sizeof buf, "%-18s %-6s %-9s %-8s %-8s\n", s.name.c_str(),
                  std::string(target_name(s.target)).c_str(), grid.c_str(),
                  s.expect_K ? g12(*s.expect_K).c_str() : "-", s.expect_P ? g12(*s.expect_P).c_str() : "-");
    t << buf;
  }
  emit(t.str(), o, out);
  return kExitPass;
}

void add_surface_options(CLI::App* sub, SurfaceOptions& so, bool with_tol) {
  sub->add_option("--surface,-s", so.surface, "catalog name or surface file")->required();
  sub->add_option("--nu", so.nu, "override grid nodes along u")->check(CLI::PositiveNumber);
  sub->add_option("--nv", so.nv, "override grid nodes along v")->check(CLI::PositiveNumber);
  sub->add_option("--seed", so.seed, "apply the seeded random Moebius transform first (0 = none)");
  if (with_tol) sub->add_option("--tol", so.tol, "residual tolerance (default by grid type)")->check(CLI::PositiveNumber);
}

void add_output(CLI::App* sub, Output& o, std::vector<std::string> formats) {
  sub->add_option("--format,-f", o.format, "output format")->check(CLI::IsMember(std::move(formats)));
  sub->add_option("--out,-o", o.path, "write the report to this file");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moebius invariants of surfaces in S^3 and S^4", "mobius"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values (sections per subcommand)");
  app.allow_config_extras(CLI::config_extras_mode::error);

  SurfaceOptions so;
  Output o;
  std::string suite = "all", csv_path, space, system = "clifford", sweep = "uv";
  double h = 1e-3;
  int n = 0;

  auto* inv = app.add_subcommand("invariants", "run the pipeline and dump invariants");
  add_surface_options(inv, so, false);
  add_output(inv, o, {"text", "json", "csv"});

  auto* ver = app.add_subcommand("verify", "run residual suites");
  add_surface_options(ver, so, true);
  ver->add_option("--suite", suite, "suite name")->check(CLI::IsMember(suite_names()));
  ver->add_option("--csv", csv_path, "also write the per-node CSV here");
  add_output(ver, o, {"text", "json", "csv"});

  auto* cls = app.add_subcommand("classify", "classify by (K, P)");
  add_surface_options(cls, so, true);
  add_output(cls, o, {"text", "json"});

  auto* obs = app.add_subcommand("obstruction", "exact obstruction polynomial and root analysis");
  obs->add_option("--space", space, "s3 or s4")->required()->check(CLI::IsMember({"s3", "s4"}));
  add_output(obs, o, {"text", "json"});

  auto* itg = app.add_subcommand("integrate", "integrate a rigid frame system and reconstruct its invariants");
  itg->add_option("--system", system, "clifford or veronese")->check(CLI::IsMember({"clifford", "veronese"}));
  itg->add_option("--step", h, "RK4 step h");
  itg->add_option("--n", n, "grid nodes per axis (default 64 clifford, 96 veronese)")->check(CLI::PositiveNumber);
  itg->add_option("--sweep", sweep, "uv: spine along u first; vu: along v first")->check(CLI::IsMember({"uv", "vu"}));
  add_output(itg, o, {"text", "json", "csv"});

  auto* cat = app.add_subcommand("catalog", "list built-in surfaces");
  add_output(cat, o, {"text", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*inv) return cmd_invariants(so, o, out);
    if (*ver) return cmd_verify(so, suite, o, csv_path, out, err);
    if (*cls) return cmd_classify(so, o, out);
    if (*obs) return cmd_obstruction(space, o, out);
    if (*itg) return cmd_integrate(system, h, n, sweep, o, out);
    if (*cat) return cmd_catalog(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mobius::cli
