#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "doctest.h"
#include "dyson/cli.hpp"
#include "json.hpp"

using namespace dyson::cli;
namespace fs = std::filesystem;

namespace {

struct Captured {
  int code;
  std::string out;
};

Captured run_captured(std::vector<std::string> args) {
  args.insert(args.begin(), "dyson");
  std::ostringstream buf;
  std::ostringstream err;
  auto* old = std::cout.rdbuf(buf.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = run(args);
  std::cout.rdbuf(old);
  std::cerr.rdbuf(old_err);
  return {code, buf.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const auto d = fs::temp_directory_path() / "dyson_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("grid syntax") {
  const auto u = parse_grid("0:1:5");
  REQUIRE(u.size() == 5);
  CHECK(u[2] == doctest::Approx(0.5));
  const auto g = parse_grid("g1e-6:1:7");
  CHECK(g.front() == 1e-6);
  CHECK(g.back() == 1.0);
  CHECK(g[3] == doctest::Approx(1e-3));
  CHECK(parse_grid("2:3:1") == std::vector<double>{2.0});
}

TEST_CASE("pure values print directly") {
  const auto r = run_captured({"pure", "--what", "idos", "--x", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "0.5\n");
  const auto w = run_captured({"pure", "--what", "omega", "--x", "2"});
  CHECK(std::stod(w.out) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("exit codes") {
  CHECK(run_captured({"pure", "--frobnicate", "1"}).code == kExitUsage);
  CHECK(run_captured({}).code == kExitUsage);
  CHECK(run_captured({"exact", "--grid", "1:2"}).code == kExitUsage);
  CHECK(run_captured({"pure", "--x", "-1"}).code == kExitUsage);
  CHECK(run_captured({"exact", "--alpha", "1.5", "--grid", "1:2:2"}).code == kExitUsage);
  CHECK(run_captured({"schmidt", "--law", "twopoint:1,2", "--grid", "1:2:2"}).code == kExitUsage);
  CHECK(run_captured({"pure", "--x", "1", "--output", "/nonexistent/dir/x.csv"}).code == kExitIo);
  CHECK(run_captured({"pure", "--x", "1", "--config", "/nonexistent/cfg"}).code == kExitIo);
}

TEST_CASE("csv and manifest") {
  const auto dir = scratch_dir();
  const auto csv = (dir / "exact.csv").string();
  const auto r = run_captured({"exact", "--alpha", "1", "--kappa", "1", "--grid", "1e-6:4:20", "--output", csv});
  REQUIRE(r.code == kExitOk);
  const auto text = slurp(csv);
  CHECK(text.rfind("x,M,clamp\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 21);
  const auto m = nlohmann::json::parse(slurp(csv + ".manifest.json"));
  CHECK(m["command"] == "exact");
  CHECK(m["seed"] == 1);
  CHECK(m["parameters"]["alpha"] == "1");
  CHECK(m["output_files"].size() == 2);
  CHECK(m["output_files"][0] == csv);
  CHECK(m.contains("timestamp"));
  CHECK(m.contains("tool_version"));
}

TEST_CASE("identical inputs give identical bytes") {
  const auto dir = scratch_dir();
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const std::vector<std::string> base = {"schmidt", "--kind", "type2", "--law", "twopoint:1,2,0.3", "--grid",
                                         "0.5:2:4", "--samples", "20000", "--seed", "17"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--output", a});
  args_b.insert(args_b.end(), {"--output", b});
  REQUIRE(run_captured(args_a).code == kExitOk);
  REQUIRE(run_captured(args_b).code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("x,Omega,stderr\n", 0) == 0);

  const auto l1 = run_captured({"lyapunov", "--grid", "1:1:1", "--steps", "5000", "--seed", "3"});
  const auto l2 = run_captured({"lyapunov", "--grid", "1:1:1", "--steps", "5000", "--seed", "3"});
  const auto l3 = run_captured({"lyapunov", "--grid", "1:1:1", "--steps", "5000", "--seed", "4"});
  CHECK(l1.out == l2.out);
  CHECK(l1.out != l3.out);
  CHECK(l1.out.rfind("omega_sq,gamma,stderr\n", 0) == 0);
}

TEST_CASE("config file with command-line override") {
  const auto dir = scratch_dir();
  const auto cfg = (dir / "run.cfg").string();
  {
    std::ofstream f(cfg);
    f << "# exact chain\nalpha = 2\nkappa = 2\ngrid = 1:2:2\n";
  }
  const auto from_file = run_captured({"exact", "--config", cfg});
  const auto direct = run_captured({"exact", "--alpha", "2", "--kappa", "2", "--grid", "1:2:2"});
  REQUIRE(from_file.code == kExitOk);
  CHECK(from_file.out == direct.out);
  const auto overridden = run_captured({"exact", "--config", cfg, "--alpha", "1", "--kappa", "1"});
  const auto plain = run_captured({"exact", "--grid", "1:2:2"});
  CHECK(overridden.out == plain.out);
}

TEST_CASE("other subcommands run") {
  CHECK(run_captured({"scaling", "--grid", "-2:2:3"}).out.rfind("x,F,D\n", 0) == 0);
  CHECK(run_captured({"dos", "--grid", "1:3:3", "--masses", "101", "--realizations", "2"}).code == kExitOk);
  const auto b = run_captured({"betaens", "--pairs", "20", "--samples", "5", "--bins", "4"});
  CHECK(b.code == kExitOk);
  CHECK(b.out.rfind("mu_lo,mu_hi,D,D_target\n", 0) == 0);
  const auto st = run_captured({"selftest"});
  CHECK(st.code == kExitOk);
  CHECK(st.out.find("FAIL") == std::string::npos);
}

TEST_CASE("stationary density output") {
  const auto r = run_captured({"schmidt", "--what", "density", "--grid", "1:1:1", "--cells", "400", "--iterations", "20"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("point,weight\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 401);
  CHECK(run_captured({"schmidt", "--what", "density", "--grid", "1:2:2"}).code == kExitUsage);
}
