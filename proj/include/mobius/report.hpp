#pragma once
/**
 * @file report.hpp
 * @brief Named residual statistics with tolerances and verdicts, and their
 * JSON / text serializations.
 */

#include <map>
#include <string>
#include <vector>

#include "mobius/diffgrid.hpp"
#include "mobius/invariants.hpp"

namespace mobius {

struct CheckResult {
  Real max = 0;
  Real rms = 0;
  std::size_t node_count = 0;
  Real tol = 0;
  bool pass = true;
  /// The equation being checked, written out.
  std::string label;
  /// Free-form remark, e.g. why a check is vacuous.
  std::string note;
};

struct ResidualReport {
  std::string surface;
  Grid grid;
  /// FNV-1a hash of the run configuration, 16 hex digits.
  std::string config_hash;
  std::map<std::string, CheckResult> checks;
  std::string verdict;
  std::vector<std::string> notes;

  /// Records a check; pass iff max <= tol (so NaN fails).
  void add(const std::string& name, const std::string& label, const FieldStats& st, Real tol,
           const std::string& note = "");
  /// Records a check that holds identically (both sides vanish, or it is vacuous).
  void add_trivial(const std::string& name, const std::string& label, Real tol, const std::string& note);
  void merge(const ResidualReport& other);

  bool passed() const;
  std::vector<std::string> failing() const;
};

/// Rounds to 12 significant digits (the serialized precision).
double round12(Real x);

std::string fnv1a_hex(const std::string& text);

std::string to_json(const ResidualReport& r);
std::string to_text(const ResidualReport& r);

}  // namespace mobius
