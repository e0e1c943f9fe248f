#include "mobius/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace mobius {

void ResidualReport::add(const std::string& name, const std::string& label, const FieldStats& st, Real tol,
                         const std::string& note) {
  CheckResult c;
  c.max = st.max;
  c.rms = st.rms;
  c.node_count = st.count;
  c.tol = tol;
  c.pass = st.max <= tol;
  c.label = label;
  c.note = note;
  checks[name] = c;
}

void ResidualReport::add_trivial(const std::string& name, const std::string& label, Real tol, const std::string& note) {
  CheckResult c;
  c.tol = tol;
  c.label = label;
  c.note = note;
  checks[name] = c;
}

void ResidualReport::merge(const ResidualReport& other) {
  for (const auto& [k, v] : other.checks) checks[k] = v;
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

bool ResidualReport::passed() const {
  for (const auto& [k, v] : checks)
    if (!v.pass) return false;
  return true;
}

std::vector<std::string> ResidualReport::failing() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : checks)
    if (!v.pass) out.push_back(k);
  return out;
}

double round12(Real x) {
  if (!std::isfinite(x)) return static_cast<double>(x);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", static_cast<double>(x));
  return std::strtod(buf, nullptr);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_json(const ResidualReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["surface"] = r.surface;
  const Grid& g = r.grid;
  j["grid"] = {{"u0", round12(g.u0)},       {"u1", round12(g.u1)},       {"v0", round12(g.v0)},
               {"v1", round12(g.v1)},       {"nu", g.nu},                {"nv", g.nv},
               {"periodic_u", g.periodic_u}, {"periodic_v", g.periodic_v}};
  j["config_hash"] = r.config_hash;
  ordered_json checks = ordered_json::array();
  for (const auto& [name, c] : r.checks) {
    ordered_json e;
    e["name"] = name;
    e["label"] = c.label;
    e["max"] = round12(c.max);
    e["rms"] = round12(c.rms);
    e["nodes"] = c.node_count;
    e["tol"] = round12(c.tol);
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["verdict"] = r.verdict;
  j["passed"] = r.passed();
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::string to_text(const ResidualReport& r) {
  std::ostringstream out;
  out << "surface " << r.surface << "  grid " << r.grid.nu << "x" << r.grid.nv << "  config " << r.config_hash
      << "\n";
  char buf[256];
  for (const auto& [name, c] : r.checks) {
    std::snprintf(buf, sizeof buf, "  [%s] %-28s max=%.12g rms=%.12g tol=%.3g nodes=%zu", c.pass ? "PASS" : "FAIL",
                  name.c_str(), round12(c.max), round12(c.rms), static_cast<double>(c.tol), c.node_count);
    out << buf << "  Eq: " << c.label;
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << "\n";
  }
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
  if (!r.verdict.empty()) out << "verdict: " << r.verdict << "\n";
  out << (r.passed() ? "result: PASS" : "result: FAIL") << "\n";
  return out.str();
}

}  // namespace mobius
