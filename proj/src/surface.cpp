#include "mobius/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mobius {

std::string_view target_name(Target t) {
  switch (t) {
    case Target::R3: return "R3";
    case Target::R4: return "R4";
    case Target::S3: return "S3";
    case Target::S4: return "S4";
  }
  return "?";
}

int component_count(Target t) {
  switch (t) {
    case Target::R3: return 3;
    case Target::R4: return 4;
    case Target::S3: return 4;
    case Target::S4: return 5;
  }
  return 0;
}

int sphere_dim(Target t) { return (t == Target::R3 || t == Target::S3) ? 3 : 4; }

std::vector<Real> inverse_stereographic(std::span<const Real> x) {
  Real r2 = 0;
  for (Real xi : x) r2 += xi * xi;
  std::vector<Real> out(x.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = 2 * x[i] / (r2 + 1);
  out.back() = (r2 - 1) / (r2 + 1);
  return out;
}

std::vector<Real> evaluate_raw(const SurfaceSpec& spec, Real u, Real v) {
  std::vector<Real> slots{u, v};
  slots.reserve(2 + spec.lets.size());
  try {
    for (const auto& [name, e] : spec.lets) slots.push_back(e.eval(slots));
    std::vector<Real> out;
    out.reserve(spec.components.size());
    for (const Expr& e : spec.components) {
      const Real x = e.eval(slots);
      if (!std::isfinite(x)) throw EvalError("non-finite value");
      out.push_back(x);
    }
    return out;
  } catch (const EvalError& err) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " at (u, v) = (%.17g, %.17g)", static_cast<double>(u), static_cast<double>(v));
    throw EvalError(std::string(err.what()) + buf + " in surface '" + spec.name + "'");
  }
}

std::vector<Real> evaluate(const SurfaceSpec& spec, Real u, Real v) {
  std::vector<Real> x = evaluate_raw(spec, u, v);
  if (spec.target == Target::R3 || spec.target == Target::R4) return inverse_stereographic(x);
  return x;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string format_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  return buf;
}

int component_slot(const std::string& key) {
  if (key.size() == 2 && key[0] == 'c' && key[1] >= '1' && key[1] <= '5') return key[1] - '1';
  if (key == "x") return 0;
  if (key == "y") return 1;
  if (key == "z") return 2;
  if (key == "w") return 3;
  return -1;
}

std::optional<Target> parse_target(const std::string& s) {
  if (s == "R3") return Target::R3;
  if (s == "R4") return Target::R4;
  if (s == "S3") return Target::S3;
  if (s == "S4") return Target::S4;
  return std::nullopt;
}

bool parse_bool(const std::string& s, int line, int col) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError("expected true or false, got '" + s + "'", line, col);
}

struct Located {
  std::string value;
  int line = 0, column = 0;
};

void check_on_sphere(const SurfaceSpec& spec) {
  if (spec.target != Target::S3 && spec.target != Target::S4) return;
  const Grid& g = spec.grid;
  Real worst = 0;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const auto p = evaluate_raw(spec, g.u(i), g.v(j));
      Real n2 = 0;
      for (Real x : p) n2 += x * x;
      worst = std::max(worst, std::abs(std::sqrt(n2) - 1));
    }
  if (worst > 1e-9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", static_cast<double>(worst));
    throw std::invalid_argument("surface '" + spec.name + "' does not lie on the unit sphere (max deviation " +
                                buf + ")");
  }
}

}  // namespace

SurfaceSpec parse_surface(std::string_view text) {
  SurfaceSpec spec;
  spec.grid = Grid{0, 1, 0, 1, 64, 64, false, false};
  std::string section;
  std::optional<Located> target_text, builtin_text, name_text;
  std::map<int, Located> component_text;
  std::vector<std::string> variables{"u", "v"};
  bool saw_grid_key[8] = {};

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    const std::string line = raw.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("unterminated section header", line_no, indent);
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (section != "surface" && section != "grid" && section != "expect")
        throw ParseError("unknown section [" + section + "]", line_no, indent);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no, indent);
    std::string key = trim(std::string_view(line).substr(0, eq));
    const std::size_t value_start = line.find_first_not_of(" \t", eq + 1);
    const int value_col = value_start == std::string::npos ? static_cast<int>(line.size()) + 1
                                                           : static_cast<int>(value_start) + 1;
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no, value_col);
    if (section.empty()) throw ParseError("key outside of any section", line_no, indent);

    if (section == "surface") {
      if (key.rfind("let ", 0) == 0) {
        const std::string let_name = trim(std::string_view(key).substr(4));
        if (let_name.empty() || !(std::isalpha(static_cast<unsigned char>(let_name[0])) || let_name[0] == '_'))
          throw ParseError("bad let name '" + let_name + "'", line_no, indent);
        if (std::find(variables.begin(), variables.end(), let_name) != variables.end() || let_name == "pi")
          throw ParseError("redefinition of '" + let_name + "'", line_no, indent);
        spec.lets.emplace_back(let_name, parse_expression(value, variables, line_no, value_col));
        variables.push_back(let_name);
      } else if (key == "name") {
        name_text = Located{value, line_no, value_col};
      } else if (key == "target") {
        target_text = Located{value, line_no, value_col};
      } else if (key == "builtin") {
        builtin_text = Located{value, line_no, value_col};
      } else if (const int slot = component_slot(key); slot >= 0) {
        if (component_text.count(slot)) throw ParseError("duplicate component '" + key + "'", line_no, indent);
        component_text[slot] = Located{value, line_no, value_col};
      } else {
        throw ParseError("unknown key '" + key + "' in [surface]", line_no, indent);
      }
    } else if (section == "grid") {
      static const char* keys[] = {"u0", "u1", "v0", "v1", "nu", "nv", "periodic_u", "periodic_v"};
      const auto it = std::find(std::begin(keys), std::end(keys), key);
      if (it == std::end(keys)) throw ParseError("unknown key '" + key + "' in [grid]", line_no, indent);
      const auto k = static_cast<std::size_t>(it - std::begin(keys));
      saw_grid_key[k] = true;
      Grid& g = spec.grid;
      switch (k) {
        case 0: g.u0 = eval_constant(value, line_no, value_col); break;
        case 1: g.u1 = eval_constant(value, line_no, value_col); break;
        case 2: g.v0 = eval_constant(value, line_no, value_col); break;
        case 3: g.v1 = eval_constant(value, line_no, value_col); break;
        case 4:
        case 5: {
          const Real n = eval_constant(value, line_no, value_col);
          if (n != std::floor(n) || n < 1) throw ParseError("node count must be a positive integer", line_no, value_col);
          (k == 4 ? g.nu : g.nv) = static_cast<int>(n);
          break;
        }
        case 6: g.periodic_u = parse_bool(value, line_no, value_col); break;
        case 7: g.periodic_v = parse_bool(value, line_no, value_col); break;
      }
    } else {
      if (key == "K") spec.expect_K = eval_constant(value, line_no, value_col);
      else if (key == "P") spec.expect_P = eval_constant(value, line_no, value_col);
      else throw ParseError("unknown key '" + key + "' in [expect]", line_no, indent);
    }
  }

  if (builtin_text) {
    if (!component_text.empty() || !spec.lets.empty())
      throw ParseError("builtin surfaces take no component expressions", builtin_text->line, builtin_text->column);
    const SurfaceSpec* base = nullptr;
    for (const auto& s : catalog())
      if (s.name == builtin_text->value) base = &s;
    if (!base) throw ParseError("unknown builtin '" + builtin_text->value + "'", builtin_text->line, builtin_text->column);
    SurfaceSpec out = *base;
    if (target_text) {
      const auto t = parse_target(target_text->value);
      if (!t) throw ParseError("unknown target '" + target_text->value + "'", target_text->line, target_text->column);
      if (*t != base->target)
        throw ParseError("builtin '" + base->name + "' has target " + std::string(target_name(base->target)),
                         target_text->line, target_text->column);
    }
    if (name_text) out.name = name_text->value;
    Grid& g = out.grid;
    const Grid& d = spec.grid;
    if (saw_grid_key[0]) g.u0 = d.u0;
    if (saw_grid_key[1]) g.u1 = d.u1;
    if (saw_grid_key[2]) g.v0 = d.v0;
    if (saw_grid_key[3]) g.v1 = d.v1;
    if (saw_grid_key[4]) g.nu = d.nu;
    if (saw_grid_key[5]) g.nv = d.nv;
    if (saw_grid_key[6]) g.periodic_u = d.periodic_u;
    if (saw_grid_key[7]) g.periodic_v = d.periodic_v;
    if (spec.expect_K) out.expect_K = spec.expect_K;
    if (spec.expect_P) out.expect_P = spec.expect_P;
    out.grid.validate();
    return out;
  }

  if (!target_text) throw ParseError("missing 'target' in [surface]", line_no + 1, 1);
  const auto target = parse_target(target_text->value);
  if (!target) throw ParseError("unknown target '" + target_text->value + "'", target_text->line, target_text->column);
  spec.target = *target;
  spec.name = name_text ? name_text->value : "unnamed";
  const int count = component_count(spec.target);
  for (const auto& [slot, loc] : component_text)
    if (slot >= count)
      throw ParseError("component c" + std::to_string(slot + 1) + " exceeds the " + std::to_string(count) +
                           " components of target " + std::string(target_name(spec.target)),
                       loc.line, loc.column);
  if (static_cast<int>(component_text.size()) != count)
    throw ParseError("target " + std::string(target_name(spec.target)) + " needs " + std::to_string(count) +
                         " components, got " + std::to_string(component_text.size()),
                     target_text->line, target_text->column);
  for (int k = 0; k < count; ++k) {
    const Located& loc = component_text.at(k);
    spec.components.push_back(parse_expression(loc.value, variables, loc.line, loc.column));
  }
  spec.grid.validate();
  check_on_sphere(spec);
  return spec;
}

std::string print_surface(const SurfaceSpec& spec) {
  std::ostringstream out;
  out << "[surface]\n";
  out << "name = " << spec.name << "\n";
  out << "target = " << target_name(spec.target) << "\n";
  if (!spec.builtin.empty()) {
    out << "builtin = " << spec.builtin << "\n";
  } else {
    for (const auto& [name, e] : spec.lets) out << "let " << name << " = " << e.to_string() << "\n";
    for (std::size_t k = 0; k < spec.components.size(); ++k)
      out << "c" << (k + 1) << " = " << spec.components[k].to_string() << "\n";
  }
  const Grid& g = spec.grid;
  out << "\n[grid]\n";
  out << "u0 = " << format_real(g.u0) << "\n";
  out << "u1 = " << format_real(g.u1) << "\n";
  out << "v0 = " << format_real(g.v0) << "\n";
  out << "v1 = " << format_real(g.v1) << "\n";
  out << "nu = " << g.nu << "\n";
  out << "nv = " << g.nv << "\n";
  out << "periodic_u = " << (g.periodic_u ? "true" : "false") << "\n";
  out << "periodic_v = " << (g.periodic_v ? "true" : "false") << "\n";
  if (spec.expect_K || spec.expect_P) {
    out << "\n[expect]\n";
    if (spec.expect_K) out << "K = " << format_real(*spec.expect_K) << "\n";
    if (spec.expect_P) out << "P = " << format_real(*spec.expect_P) << "\n";
  }
  return out.str();
}

void validate_surface(const SurfaceSpec& spec) {
  spec.grid.validate();
  if (static_cast<int>(spec.components.size()) != component_count(spec.target))
    throw std::invalid_argument("component count does not match target");
  check_on_sphere(spec);
  const Grid& g = spec.grid;
  const int dim = sphere_dim(spec.target) + 1;
  NodeField<ComplexLorentzVec> f(g.nu, g.nv);
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const auto p = evaluate(spec, g.u(i), g.v(j));
      ComplexLorentzVec x(dim);
      for (int k = 0; k < dim; ++k) x[k] = p[k];
      f(i, j) = x;
    }
  const VecField fz = d_z(f, g);
  for (std::size_t k = 0; k < fz.size(); ++k) {
    Real m = 0;
    for (int c = 0; c < dim; ++c) m += std::norm(fz[k][c]);
    if (!(m > 1e-8))
      throw std::invalid_argument("surface '" + spec.name + "' is not immersed: <f_z, f_zbar> <= 1e-8 on the grid");
  }
}

namespace {

const char* const kCatalogDocs[] = {
    R"(
[surface]
name = clifford
target = S3
let a = 2*sqrt(2)
c1 = cos(a*u)/sqrt(2)
c2 = sin(a*u)/sqrt(2)
c3 = cos(a*v)/sqrt(2)
c4 = sin(a*v)/sqrt(2)
[grid]
u0 = 0
u1 = pi/sqrt(2)
v0 = 0
v1 = pi/sqrt(2)
nu = 64
nv = 64
periodic_u = true
periodic_v = true
[expect]
K = 0
P = -2
)",
    R"(
[surface]
name = catenoid
target = R3
c1 = cosh(v)*cos(u)
c2 = cosh(v)*sin(u)
c3 = v
[grid]
u0 = 0
u1 = 2*pi
v0 = -1.2
v1 = 1.2
nu = 64
nv = 96
periodic_u = true
periodic_v = false
[expect]
K = 1
P = 0
)",
    R"(
[surface]
name = enneper
target = R3
c1 = u - u^3/3 + u*v^2
c2 = -v + v^3/3 - v*u^2
c3 = u^2 - v^2
[grid]
u0 = -1
u1 = 1
v0 = -1
v1 = 1
nu = 96
nv = 96
periodic_u = false
periodic_v = false
[expect]
K = 1
P = 0
)",
    R"(
[surface]
name = helicoid
target = R3
c1 = sinh(v)*cos(u)
c2 = sinh(v)*sin(u)
c3 = u
[grid]
u0 = -1
u1 = 1
v0 = -1
v1 = 1
nu = 96
nv = 96
periodic_u = false
periodic_v = false
[expect]
K = 1
P = 0
)",
    R"(
[surface]
name = complex_parabola
target = R4
c1 = u
c2 = v
c3 = (u^2 - v^2)/2
c4 = u*v
[grid]
u0 = 0.2
u1 = 1.2
v0 = 0.2
v1 = 1.2
nu = 96
nv = 96
periodic_u = false
periodic_v = false
[expect]
K = 2
P = 0
)",
    R"(
[surface]
name = veronese
target = S4
let d = 1 + u^2 + v^2
let sx = 2*u/d
let sy = 2*v/d
let sz = (u^2 + v^2 - 1)/d
let r3 = sqrt(3)
c1 = r3*sx*sy
c2 = r3*sx*sz
c3 = r3*sy*sz
c4 = r3*(sx^2 - sy^2)/2
c5 = (sx^2 + sy^2 - 2*sz^2)/2
[grid]
u0 = 0.15
u1 = 1.0
v0 = 0.15
v1 = 1.0
nu = 96
nv = 96
periodic_u = false
periodic_v = false
[expect]
K = 0.5
P = -3
)",
    R"(
[surface]
name = cylinder
target = R3
c1 = cos(u)
c2 = sin(u)
c3 = v
[grid]
u0 = 0
u1 = 2*pi
v0 = -1
v1 = 1
nu = 64
nv = 64
periodic_u = true
periodic_v = false
)",
};

}  // namespace

const std::vector<SurfaceSpec>& catalog() {
  static const std::vector<SurfaceSpec> specs = [] {
    std::vector<SurfaceSpec> out;
    for (const char* doc : kCatalogDocs) {
      SurfaceSpec s = parse_surface(doc);
      s.builtin = s.name;
      out.push_back(std::move(s));
    }
    return out;
  }();
  return specs;
}

const SurfaceSpec& builtin_surface(std::string_view name) {
  for (const auto& s : catalog())
    if (s.name == name) return s;
  throw std::out_of_range("unknown surface '" + std::string(name) + "'");
}

SurfaceSpec load_surface(std::string_view name_or_path) {
  for (const auto& s : catalog())
    if (s.name == name_or_path) return s;
  const std::filesystem::path path{std::string(name_or_path)};
  if (!std::filesystem::exists(path)) throw std::out_of_range("unknown surface '" + std::string(name_or_path) + "'");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_surface(buf.str());
}

}  // namespace mobius
