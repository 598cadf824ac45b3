#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {
struct Run {
  int status;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run run(const std::string& args) {
  const char* exe = std::getenv("RND_CLI");
  REQUIRE(exe != nullptr);
  const std::string cmd = std::string(exe) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("rnd_cli_test_" + name);
  fs::remove_all(d);
  return d;
}
}  // namespace

TEST_CASE("singular-het prints the wavespeed") {
  const fs::path d = scratch("het");
  const Run r = run("--out " + d.string() + " --a 0 singular-het");
  CHECK(r.status == 0);
  const auto pos = r.out.find("c = ");
  REQUIRE(pos != std::string::npos);
  const double c = std::stod(r.out.substr(pos + 4));
  CHECK(std::abs(c - 0.19686) < 1e-4);
  CHECK(fs::exists(d / "singular_het.json"));
}

TEST_CASE("invalid parameters exit with status 1") {
  const Run r = run("--gamma1 0.8 --gamma2 0.7 equal-area");
  CHECK(r.status == 1);
  CHECK(r.out.find("gamma1 < gamma2") != std::string::npos);

  const Run bad_key = run("--out /tmp singular-het --set c_lo=abc");
  CHECK(bad_key.status == 1);

  const fs::path d = scratch("cfg");
  fs::create_directories(d);
  std::ofstream(d / "bad.json") << "{\"model\": {\"gama\": 1}}";
  const Run r2 = run("--config " + (d / "bad.json").string() + " equal-area");
  CHECK(r2.status == 1);
  CHECK(r2.out.find("gama") != std::string::npos);

  CHECK(run("no-such-command").status == 1);
}

TEST_CASE("config file and flags combine") {
  const fs::path d = scratch("combine");
  fs::create_directories(d);
  std::ofstream(d / "cfg.json") << R"({"preset": "symmetric", "options": {"c_lo": -0.1, "c_hi": 0.1, "c_grid": 9}})";
  const Run r = run("--config " + (d / "cfg.json").string() + " --out " + d.string() + " singular-het");
  CHECK(r.status == 0);
  const auto pos = r.out.find("c = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(r.out.substr(pos + 4))) < 1e-9);
}

TEST_CASE("outputs are deterministic and carry metadata") {
  const fs::path d1 = scratch("det1"), d2 = scratch("det2");
  const std::string args = " layer-bif --set delta_min=-0.1 --set delta_max=0.1 --set n=11";
  REQUIRE(run("--out " + d1.string() + args).status == 0);
  REQUIRE(run("--out " + d2.string() + " --threads 1" + args).status == 0);
  const std::string a = slurp(d1 / "layer_branch.csv"), b = slurp(d2 / "layer_branch.csv");
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.rfind("# params: {", 0) == 0);
  CHECK(a.find("delta,w,kind,u_l,u_r") != std::string::npos);
}
