#pragma once
/**
 * @file surface.hpp
 * @brief Parametrized surfaces in R^3, R^4, S^3, S^4 given by closed-form
 * component expressions in (u, v), the surface-definition document format,
 * and the built-in catalog.
 *
 * Euclidean targets are carried to the sphere by the inverse stereographic
 * projection sigma(x) = (2x, |x|^2 - 1) / (|x|^2 + 1), pole on the last axis.
 *
 * Document format (one `key = value` per line, `#` starts a comment):
 *
 *     [surface]
 *     name   = catenoid
 *     target = R3                  # R3 | R4 | S3 | S4
 *     let r  = cosh(v)             # optional helper definitions, in order
 *     c1     = r*cos(u)            # c1..c5, or x, y, z, w for c1..c4
 *     c2     = r*sin(u)
 *     c3     = v
 *     # ...or instead of components:  builtin = clifford
 *
 *     [grid]                       # values may be constant expressions
 *     u0 = 0
 *     u1 = 2*pi
 *     v0 = -1.2
 *     v1 = 1.2
 *     nu = 64
 *     nv = 96
 *     periodic_u = true
 *     periodic_v = false
 *
 *     [expect]                     # optional
 *     K = 1
 *     P = 0
 */

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mobius/diffgrid.hpp"
#include "mobius/expr.hpp"
#include "mobius/minkowski.hpp"

namespace mobius {

enum class Target { R3, R4, S3, S4 };

std::string_view target_name(Target t);
/// Number of component expressions: 3, 4, 4, 5.
int component_count(Target t);
/// Dimension n of the sphere S^n the surface lands in.
int sphere_dim(Target t);

struct SurfaceSpec {
  std::string name;
  Target target = Target::S3;
  /// Catalog id when loaded with `builtin = ...`, empty otherwise.
  std::string builtin;
  std::vector<std::pair<std::string, Expr>> lets;
  std::vector<Expr> components;
  Grid grid;
  std::optional<Real> expect_K;
  std::optional<Real> expect_P;

  friend bool operator==(const SurfaceSpec&, const SurfaceSpec&) = default;
};

/// Inverse stereographic projection R^n -> S^n.
std::vector<Real> inverse_stereographic(std::span<const Real> x);

/// Component values before the stereographic map (the Euclidean immersion for
/// R^n targets). Throws EvalError with the offending (u, v).
std::vector<Real> evaluate_raw(const SurfaceSpec& spec, Real u, Real v);

/// Point of S^n in R^{n+1}.
std::vector<Real> evaluate(const SurfaceSpec& spec, Real u, Real v);

/// Parses a surface-definition document. Errors carry line and column.
SurfaceSpec parse_surface(std::string_view text);

/// Document text; parse_surface(print_surface(s)) == s.
std::string print_surface(const SurfaceSpec& spec);

/// Checks the spec's invariants on its default grid: unit norm for sphere
/// targets (max deviation reported in the message) and a non-degenerate
/// induced metric <f_z, f_zbar> > 1e-8.
void validate_surface(const SurfaceSpec& spec);

/// Built-in surfaces: clifford, catenoid, enneper, helicoid,
/// complex_parabola, veronese, cylinder.
const std::vector<SurfaceSpec>& catalog();

/// Catalog lookup; throws std::out_of_range naming the unknown surface.
const SurfaceSpec& builtin_surface(std::string_view name);

/// Loads a surface from a builtin name or a document path.
SurfaceSpec load_surface(std::string_view name_or_path);

}  // namespace mobius
