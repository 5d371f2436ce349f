#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swimsim/swimsim.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "swimsim_capi_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SWIMSIM_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("version") { CHECK(std::string(swimsim_version()).size() > 0); }

TEST_CASE("config parse, set, get and text") {
  const char* overrides[] = {"mode=pivot", "mu=2"};
  swimsim_config* c = nullptr;
  REQUIRE(swimsim_config_parse("R = 0.007\n", overrides, 2, &c) == SWIMSIM_OK);
  double v = 0.0;
  CHECK(swimsim_config_get(c, "mu", &v) == SWIMSIM_OK);
  CHECK(v == 2.0);
  CHECK(swimsim_config_get(c, "R", &v) == SWIMSIM_OK);
  CHECK(v == 0.007);
  CHECK(swimsim_config_get(c, "mode", &v) == SWIMSIM_ERROR_INVALID_ARGUMENT);
  CHECK(swimsim_config_get(c, "bogus", &v) == SWIMSIM_ERROR_CONFIG);
  CHECK(std::string(swimsim_last_error()).find("bogus") != std::string::npos);

  CHECK(swimsim_config_set(c, "mu=-1") == SWIMSIM_OK);
  CHECK(swimsim_config_validate(c) == SWIMSIM_ERROR_CONFIG);
  CHECK(std::string(swimsim_last_error()).find("mu") != std::string::npos);
  CHECK(swimsim_config_set(c, "mu=1") == SWIMSIM_OK);
  CHECK(swimsim_config_validate(c) == SWIMSIM_OK);
  CHECK(std::string(swimsim_last_error()).empty());

  size_t needed = 0;
  CHECK(swimsim_config_to_text(c, nullptr, 0, &needed) == SWIMSIM_OK);
  std::string text(needed, '\0');
  CHECK(swimsim_config_to_text(c, text.data(), text.size(), nullptr) == SWIMSIM_OK);
  CHECK(text.find("mode = pivot") != std::string::npos);
  char small[8];
  CHECK(swimsim_config_to_text(c, small, sizeof small, nullptr) == SWIMSIM_OK);
  CHECK(std::string(small).size() == 7);

  CHECK(swimsim_config_get_text(c, "mode", small, sizeof small, nullptr) == SWIMSIM_OK);
  CHECK(std::string(small) == "pivot");
  swimsim_config_free(c);
}

TEST_CASE("config errors") {
  swimsim_config* c = nullptr;
  CHECK(swimsim_config_parse("", nullptr, 0, &c) == SWIMSIM_ERROR_CONFIG);
  CHECK(c == nullptr);
  CHECK(std::string(swimsim_last_error()).find("mode") != std::string::npos);
  CHECK(swimsim_config_load("/nonexistent/file.cfg", nullptr, 0, &c) == SWIMSIM_ERROR_CONFIG);
  CHECK(swimsim_config_parse(nullptr, nullptr, 0, &c) == SWIMSIM_ERROR_INVALID_ARGUMENT);
  swimsim_config_free(nullptr);
}

TEST_CASE("run and read the summary") {
  const char* overrides[] = {"mode=pivot", "T_end=0.03", "omega1=10", "omega2=-10"};
  swimsim_config* c = nullptr;
  REQUIRE(swimsim_config_parse("", overrides, 4, &c) == SWIMSIM_OK);
  const fs::path dir = scratch("run");
  swimsim_result* r = nullptr;
  REQUIRE(swimsim_run(c, dir.c_str(), &r) == SWIMSIM_OK);
  CHECK(fs::exists(swimsim_result_table_path(r)));
  CHECK(fs::exists(swimsim_result_summary_path(r)));
  CHECK(fs::exists(swimsim_result_config_path(r)));
  CHECK(swimsim_result_count(r) > 3);
  const char* key = nullptr;
  const char* value = nullptr;
  CHECK(swimsim_result_entry(r, 0, &key, &value) == SWIMSIM_OK);
  CHECK(std::string(key) == "mode");
  CHECK(std::string(value) == "pivot");
  CHECK(swimsim_result_entry(r, 1000, &key, &value) == SWIMSIM_ERROR_INVALID_ARGUMENT);
  double steps = 0.0;
  CHECK(swimsim_result_get(r, "steps", &steps) == SWIMSIM_OK);
  CHECK(steps == 3.0);
  CHECK(swimsim_result_get(r, "mode", &steps) == SWIMSIM_ERROR_INVALID_ARGUMENT);
  swimsim_result_free(r);
  swimsim_config_free(c);
}

TEST_CASE("speed solve and infeasible reference") {
  const char* overrides[] = {"mode=control", "phases=4"};
  swimsim_config* c = nullptr;
  REQUIRE(swimsim_config_parse("", overrides, 2, &c) == SWIMSIM_OK);
  double w1 = 0, w2 = 0, bmax = 0;
  CHECK(swimsim_solve_speeds(c, 0.1, &w1, &w2, &bmax) == SWIMSIM_OK);
  CHECK(w1 > 0.0);
  CHECK(w2 == doctest::Approx(-w1).epsilon(0.05));
  CHECK(bmax > 0.1);
  double reported = 0.0;
  CHECK(swimsim_solve_speeds(c, 1.0, &w1, &w2, &reported) == SWIMSIM_ERROR_NUMERICAL);
  CHECK(reported == doctest::Approx(bmax));
  swimsim_config_free(c);
}

TEST_CASE("stepwise pivot simulation") {
  const char* overrides[] = {"mode=pivot"};
  swimsim_config* c = nullptr;
  REQUIRE(swimsim_config_parse("", overrides, 1, &c) == SWIMSIM_OK);
  swimsim_pivot_sim* sim = nullptr;
  REQUIRE(swimsim_pivot_create(c, &sim) == SWIMSIM_OK);
  for (int i = 0; i < 5; ++i) CHECK(swimsim_pivot_step(sim, 20.0, -20.0, 0.01) == SWIMSIM_OK);
  double t = 0, beta = 0, beta_dot = 0;
  CHECK(swimsim_pivot_state(sim, &t, &beta, &beta_dot) == SWIMSIM_OK);
  CHECK(t == doctest::Approx(0.05));
  CHECK(beta > 0.0);
  CHECK(swimsim_pivot_step(sim, 20.0, -20.0, 0.0) == SWIMSIM_ERROR_INVALID_ARGUMENT);
  swimsim_pivot_free(sim);
  swimsim_config_free(c);
}

TEST_CASE("command line exit codes and reproducible output") {
  const fs::path dir = scratch("cli");
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "T_end = 0.03\nomega1 = 120 rpm\nomega2 = -120 rpm\nphases = 4\n";
  const std::string common = "--config \"" + cfg.string() + "\"";

  CHECK(run_cli("pivot " + common + " --out \"" + (dir / "a").string() + "\"") == 0);
  CHECK(run_cli("pivot " + common + " --out \"" + (dir / "b").string() + "\"") == 0);
  for (const char* f : {"trajectory.csv", "summary.csv", "resolved.cfg"}) {
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  // the echoed config drives an identical run
  CHECK(run_cli("pivot --config \"" + (dir / "a" / "resolved.cfg").string() + "\" --out \"" +
                (dir / "c").string() + "\"") == 0);
  CHECK(slurp(dir / "a" / "trajectory.csv") == slurp(dir / "c" / "trajectory.csv"));

  CHECK(run_cli("pivot " + common + " --override mu=-1 --out \"" + (dir / "d").string() + "\"") == 2);
  CHECK(run_cli("pivot " + common + " --override nonsense=1 --out \"" + (dir / "d").string() + "\"") == 2);
  CHECK(run_cli("control " + common + " --override beta_ref=80deg --out \"" + (dir / "e").string() + "\"") == 3);
  CHECK(run_cli("teleport") == 2);
  CHECK(run_cli("calibrate " + common + " --out \"" + (dir / "f").string() + "\"") == 0);
  CHECK(fs::exists(dir / "f" / "calibration.csv"));
}
