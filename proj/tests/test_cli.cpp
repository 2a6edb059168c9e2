#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// End-to-end checks of the command-line contract: exit codes, pinned output
// values, file outputs.  The binary path comes from the build system.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct RunOutput {
  int exit_code;
  std::string text;
};

RunOutput run(const std::string& args) {
  const std::string cmd = std::string(CALABI_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return RunOutput{WEXITSTATUS(status), out};
}

nlohmann::json run_json(const std::string& args, int expect_exit) {
  const auto r = run(args);
  CHECK(r.exit_code == expect_exit);
  return nlohmann::json::parse(r.text);
}

}  // namespace

TEST_CASE("analyze: headline values and exit codes") {
  const auto j = run_json("analyze x=1/2", 0);
  CHECK(j["schema"] == 1);
  CHECK(j["A"] == "2400/11 pi^2");
  CHECK(j["B"] == "2912/11 pi^2");
  CHECK(j["sobolev"]["bound_valid"] == true);

  const auto j1 = run_json("analyze x=1", 0);
  CHECK(j1["A"] == "192 pi^2");

  CHECK(run("analyze x=2").exit_code == 3);     // outside the Kahler cone
  CHECK(run("analyze x=junk").exit_code == 2);  // parse failure
  CHECK(run("analyze").exit_code == 2);
  CHECK(run("analyze x=1/2 --bogus-flag").exit_code == 2);
}

TEST_CASE("analyze: verbose class spec and explicit energy") {
  const auto j = run_json("analyze \"h:3 e:1/2,1/2,1/2\" --energy 240", 0);
  CHECK(j["A"] == "2400/11 pi^2");
  CHECK(j["sobolev"]["yamabe_sq_lower"] == "96 pi^2");
}

TEST_CASE("exclude: verdict-driven exit codes") {
  const auto r0 = run("exclude x=1/2 --energy B- --z3");
  CHECK(r0.exit_code == 0);
  const auto j = nlohmann::json::parse(r0.text);
  CHECK(j["verdict"] == "EXCLUDED");
  CHECK(j["cases"][0]["candidates"].size() == 5);

  CHECK(run("exclude x=1/2 --energy 1000 --z3").exit_code == 1);

  const auto r1 = run("exclude x=1/2 --energy B-");
  CHECK(r1.exit_code == 1);  // no Z3 symmetry: the argument cannot close
  CHECK(r1.text.find("TRIPLE_COPY_UNAVAILABLE") != std::string::npos);

  CHECK(run("exclude x=2 --energy 1000 --z3").exit_code == 3);
  CHECK(run("exclude x=1/2 --energy 0.5 --z3").exit_code == 2);  // decimals rejected
}

TEST_CASE("exclude: flip threshold report") {
  const auto j = run_json("exclude x=1/2 --energy B- --z3 --flip", 0);
  REQUIRE(j.contains("flip_threshold"));
  const std::string hi = j["flip_threshold"]["first_not_excluded"];
  CHECK(hi.find("pi^2") != std::string::npos);
}

TEST_CASE("flow: convergent cosine run with outputs") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "calabi_cli_flow_test";
  fs::create_directories(dir);
  const std::string prefix = (dir / "run").string();

  const auto j = run_json("flow --grid 32 --init cos:1e-3 --tmax 0.05 --rtol 1e-8 --out " + prefix, 0);
  CHECK(j["converged"] == true);
  CHECK(j["max_abs_R"].get<double>() < 1e-8);

  std::ifstream csv(prefix + ".csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "time,calabi_energy,max_abs_R,total_area,dt");
  CHECK(fs::file_size(prefix + ".phi.f64") == 32 * 32 * 8);
  CHECK(fs::file_size(prefix + ".u.f64") == 32 * 32 * 8);

  fs::remove_all(dir);
}

TEST_CASE("flow: trivial and invalid initializations") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "calabi_cli_flow_triv";
  fs::create_directories(dir);
  const std::string prefix = (dir / "zero").string();
  const auto j = run_json("flow --grid 32 --init zero --tmax 0.001 --out " + prefix, 0);
  CHECK(j["calabi_energy"].get<double>() < 1e-20);
  CHECK(run("flow --grid 32 --init wobble:3 --out " + prefix).exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("catalog lists candidates within budget") {
  const auto j = run_json("catalog --b2 1 --budget 200/11", 0);
  REQUIRE(j["candidates"].size() == 5);
  CHECK(j["candidates"][1]["params"] == nlohmann::json::array({2}));
  CHECK(j["candidates"][1]["ric0"] == "0 pi^2");
  CHECK(run("catalog --b2 4 --budget 10").exit_code == 2);
}

TEST_CASE("check-interp passes on random fields") {
  const auto j = run_json("check-interp --grid 32 --count 25 --band 4 --seed 5", 0);
  CHECK(j["all_hold"] == true);
  CHECK(j["failures"] == 0);
}
