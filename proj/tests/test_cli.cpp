#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "mobius/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"mobius"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  Run r;
  r.code = mobius::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mobius_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("catalog lists the built-in surfaces") {
  const Run r = run({"catalog"});
  CHECK(r.code == mobius::cli::kExitPass);
  for (const char* name : {"clifford", "catenoid", "enneper", "helicoid", "complex_parabola", "veronese", "cylinder"})
    CHECK_MESSAGE(r.out.find(name) != std::string::npos, name);
}

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == mobius::cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == mobius::cli::kExitUsage);
  CHECK(run({"verify", "--surface", "clifford", "--suite", "bogus"}).code == mobius::cli::kExitUsage);
  CHECK(run({"obstruction", "--space", "s5"}).code == mobius::cli::kExitUsage);
}

TEST_CASE("unknown surface exits with a usage error") {
  const Run r = run({"verify", "--surface", "klein_bottle"});
  CHECK(r.code == mobius::cli::kExitUsage);
  CHECK(r.err.find("klein_bottle") != std::string::npos);
}

TEST_CASE("verify exit codes follow the checks") {
  CHECK(run({"verify", "-s", "clifford", "--suite", "structure"}).code == mobius::cli::kExitPass);
  const Run cyl = run({"verify", "-s", "cylinder", "--suite", "willmore"});
  CHECK(cyl.code == mobius::cli::kExitFail);
  CHECK(cyl.out.find("FAIL") != std::string::npos);
}

TEST_CASE("JSON output is byte-identical across runs") {
  const Run a = run({"verify", "-s", "clifford", "--suite", "lemmaP", "-f", "json"});
  const Run b = run({"verify", "-s", "clifford", "--suite", "lemmaP", "-f", "json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"config_hash\"") != std::string::npos);
  const Run o1 = run({"obstruction", "--space", "s3", "-f", "json"});
  const Run o2 = run({"obstruction", "--space", "s3", "-f", "json"});
  CHECK(o1.out == o2.out);
}

TEST_CASE("config hash depends on the configuration") {
  const Run a = run({"verify", "-s", "clifford", "--suite", "lemmaP", "-f", "json"});
  const Run b = run({"verify", "-s", "clifford", "--suite", "lemmaP", "-f", "json", "--tol", "1e-5"});
  CHECK(a.out != b.out);
}

TEST_CASE("obstruction reports no admissible K") {
  for (const char* space : {"s3", "s4"}) {
    const Run r = run({"obstruction", "--space", space});
    CHECK(r.code == mobius::cli::kExitPass);
  }
  const Run s3 = run({"obstruction", "--space", "s3"});
  CHECK(s3.out.find("8/27") != std::string::npos);
  CHECK(s3.out.find("8/3") != std::string::npos);
}

TEST_CASE("classify prints a verdict") {
  const Run r = run({"classify", "-s", "clifford"});
  CHECK(r.code == mobius::cli::kExitPass);
  CHECK(r.out.find("CliffordClass") != std::string::npos);
}

TEST_CASE("per-node CSV and report file") {
  const fs::path csv = scratch("nodes.csv"), out = scratch("report.json");
  const std::string csv_s = csv.string(), out_s = out.string();
  const Run r = run({"verify", "-s", "clifford", "--suite", "structure", "--csv", csv_s.c_str(), "-f", "json", "-o",
                     out_s.c_str()});
  CHECK(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("u,v,K,ReP,ImP,psi,willmore_res,swillmore_defect,omega,usable\n", 0) == 0);
  CHECK(slurp(out).find("\"structure.hopf\"") != std::string::npos);
}

TEST_CASE("invariants dump in each format") {
  CHECK(run({"invariants", "-s", "clifford", "--nu", "32", "--nv", "32"}).code == 0);
  const Run j = run({"invariants", "-s", "clifford", "--nu", "32", "--nv", "32", "-f", "json"});
  CHECK(j.code == 0);
  CHECK(j.out.front() == '{');
  const Run c = run({"invariants", "-s", "clifford", "--nu", "32", "--nv", "32", "-f", "csv"});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("u,v,", 0) == 0);
}

TEST_CASE("unwritable output path is a usage error") {
  CHECK(run({"obstruction", "--space", "s3", "-o", "/nonexistent/dir/out.txt"}).code == mobius::cli::kExitUsage);
}

TEST_CASE("config file supplies options and rejects unknown keys") {
  const fs::path good = scratch("good.toml"), bad = scratch("bad.toml");
  std::ofstream(good) << "[obstruction]\nspace = \"s4\"\n";
  std::ofstream(bad) << "[obstruction]\nspace = \"s4\"\ncolour = \"red\"\n";
  const std::string g = good.string(), b = bad.string();
  const Run ok = run({"--config", g.c_str(), "obstruction"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("S4") != std::string::npos);
  CHECK(run({"--config", b.c_str(), "obstruction"}).code == mobius::cli::kExitUsage);
}

TEST_CASE("integrate reconstructs the Clifford torus") {
  const Run r = run({"integrate", "--system", "clifford", "--n", "32"});
  CHECK(r.code == 0);
  CHECK(r.out.find("rigid.closed_form") != std::string::npos);
  CHECK(run({"integrate", "--system", "clifford", "--n", "32", "--sweep", "xy"}).code == mobius::cli::kExitUsage);
}
