#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "swimsim/control.hpp"
#include "swimsim/run.hpp"

using namespace swimsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const char* name) { return slurp(fs::path(SWIMSIM_TEST_DATA_DIR) / name); }

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "swimsim_run_test" / name;
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t columns(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

config::RunConfig base(const char* mode) {
  config::RunConfig c = config::parse_config(fmt::format("mode = {}\nT_end = 0.05\nphases = 4\n", mode));
  config::validate(c);
  return c;
}

}  // namespace

TEST_CASE("headers match the golden files") {
  CHECK(app::trajectory_header(dynamics::Mode::pivot) == golden("pivot_header.csv"));
  CHECK(app::trajectory_header(dynamics::Mode::free) == golden("free_header.csv"));
  CHECK(app::sweep_header() == golden("sweep_header.csv"));
  CHECK(app::calibration_header() == golden("calibration_header.csv"));
  CHECK(app::summary_header() == golden("summary_header.csv"));
}

TEST_CASE("pivot run writes a consistent, reproducible table") {
  config::RunConfig c = base("pivot");
  c.omega1 = 20.0;
  c.omega2 = -20.0;
  const auto a = app::run(c, scratch("pivot_a"));
  const auto b = app::run(c, scratch("pivot_b"));
  CHECK(slurp(a.table_file) == slurp(b.table_file));
  CHECK(slurp(a.summary_file) == slurp(b.summary_file));
  CHECK(slurp(a.config_file) == slurp(b.config_file));

  const auto rows = lines(slurp(a.table_file));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] + "\n" == app::trajectory_header(dynamics::Mode::pivot));
  for (const auto& r : rows) CHECK(columns(r) == columns(rows[0]));
  CHECK(a.table_file.filename() == "trajectory.csv");

  const auto summary = lines(slurp(a.summary_file));
  CHECK(summary[0] == "quantity,value,unit");
  bool found = false;
  for (const auto& [k, v] : a.summary) found = found || k == "beta_ss";
  CHECK(found);
}

TEST_CASE("resolved config round trips") {
  config::RunConfig c = base("pivot");
  c.omega1 = 280.0 * 2 * kPi / 60;
  c.omega2 = -c.omega1;
  c.T_end = 0.02;
  const auto r = app::run(c, scratch("roundtrip"));
  const std::string text = slurp(r.config_file);
  CHECK(text.rfind("# swimsim ", 0) == 0);
  CHECK(text.find("# schema 1\n") != std::string::npos);
  const config::RunConfig back = config::load_config(r.config_file);
  CHECK(config::to_text(back) == config::to_text(c));
}

TEST_CASE("free run table shape") {
  config::RunConfig c = base("free");
  c.omega1 = -15.0;
  c.omega2 = -15.0;
  const auto r = app::run(c, scratch("free"));
  const auto rows = lines(slurp(r.table_file));
  REQUIRE(rows.size() == 7);
  for (const auto& row : rows) CHECK(columns(row) == columns(rows[0]));
}

TEST_CASE("one point sweep equals a standalone evaluation") {
  config::RunConfig c = base("sweep");
  c.sweep_kind = config::SweepKind::spacing;
  c.sweep_d_over_R_min = c.sweep_d_over_R_max = 3.5;
  c.sweep_d_over_R_n = 1;
  const auto r = app::run(c, scratch("sweep"));
  const auto rows = lines(slurp(r.table_file));
  REQUIRE(rows.size() == 2);
  const auto p = sweep::evaluate_point({c.sweep_lambda_over_l, c.sweep_R_over_lambda, 3.5}, config::sweep_settings(c));
  CHECK(rows[1].find(fmt::format(",{:.12g},", p.f_bar)) != std::string::npos);
  CHECK(rows[1].find(fmt::format(",{:.12g},", p.t_bar)) != std::string::npos);
  CHECK(rows[1].find(",ok,") != std::string::npos);
}

TEST_CASE("bacteria sweep labels its rows") {
  config::RunConfig c = base("sweep");
  c.sweep_kind = config::SweepKind::bacteria;
  c.phases = 2;
  const auto rows = lines(slurp(app::run(c, scratch("bacteria")).table_file));
  REQUIRE(rows.size() == 7);
  CHECK(rows[2].rfind("Escherichia coli,", 0) == 0);
}

TEST_CASE("calibrate and control") {
  config::RunConfig c = base("calibrate");
  const auto cal = app::run(c, scratch("calibrate"));
  CHECK(lines(slurp(cal.table_file)).size() == c.omega_grid.size() + 1);
  double k1 = 0.0;
  for (const auto& [k, v] : cal.summary) {
    if (k == "K1") k1 = std::stod(v);
  }
  CHECK(k1 > 0.0);

  c.mode = config::RunMode::control;
  c.beta_ref = 0.1;
  const auto ctl = app::run(c, scratch("control"));
  double w1 = 0.0;
  double w2 = 0.0;
  for (const auto& [k, v] : ctl.summary) {
    if (k == "omega1") w1 = std::stod(v);
    if (k == "omega2") w2 = std::stod(v);
  }
  CHECK(w1 > 0.0);
  CHECK(w2 < 0.0);

  c.beta_ref = 1.0;
  CHECK_THROWS_AS(app::run(c, scratch("control_bad")), control::InfeasibleReference);
}

TEST_CASE("invalid config is refused before anything is written") {
  config::RunConfig c = base("pivot");
  c.mu = -1.0;
  const fs::path dir = scratch("invalid");
  CHECK_THROWS_AS(app::run(c, dir), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}
