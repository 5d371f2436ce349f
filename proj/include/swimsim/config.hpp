#pragma once

// Run configuration: key = value text files with SI defaults.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swimsim/common.hpp"
#include "swimsim/dynamics.hpp"
#include "swimsim/geometry.hpp"
#include "swimsim/head_model.hpp"
#include "swimsim/sweep.hpp"

namespace swimsim::config {

enum class RunMode { pivot, free, sweep, control, calibrate };
enum class SweepKind { pitch_radius, spacing, bacteria };

std::string_view to_string(RunMode mode);
std::string_view to_string(SweepKind kind);
std::optional<RunMode> parse_mode(std::string_view text);

struct RunConfig {
  // material and fluid
  double E = 4.107e9;
  double rho = 1260.0;
  double mu = 1.0;
  // flagella
  double r0 = 1.58e-3;
  double R = 6.36e-3;
  double lambda = 31.8e-3;
  double l = 95.4e-3;
  double d = 22e-3;
  // head
  double r_h = 25e-3;
  double h = 43e-3;
  double r_m = 2e-3;
  double m_h = 0.1;
  double g = 9.8;
  // numerics
  double dl = 5e-3;
  double dt = 0.01;
  double C_t = 4.0;
  double C_r = 2.3;

  std::optional<RunMode> mode;
  double omega1 = 0.0;  // rad/s
  double omega2 = 0.0;
  double beta_ref = 0.0;  // rad
  double beta0 = 0.0;     // initial pitch, rad
  double T_end = 10.0;
  std::string output = "out";
  long long seed = 0;

  int phases = 16;
  int threads = 0;
  double omega_max = 30.0;
  double f_max = 0.0;  // 0 derives the limit from the calibration and omega_max
  std::vector<double> omega_grid{6.28, 10.47, 14.66, 20.94};

  SweepKind sweep_kind = SweepKind::spacing;
  double sweep_omega = 20.94;
  double sweep_lambda_over_l = 0.33;
  double sweep_R_over_lambda = 0.2;
  double sweep_d_over_R = 3.0;
  double sweep_lambda_over_l_min = 0.1;
  double sweep_lambda_over_l_max = 1.0;
  int sweep_lambda_over_l_n = 24;
  double sweep_R_over_lambda_min = 0.05;
  double sweep_R_over_lambda_max = 0.5;
  int sweep_R_over_lambda_n = 24;
  double sweep_d_over_R_min = 2.0;
  double sweep_d_over_R_max = 8.0;
  int sweep_d_over_R_n = 25;
};

/// Parses config text without validating it. `source` names the input in
/// error messages.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Applies one `key=value` assignment.
void apply_override(RunConfig& config, std::string_view assignment);

/// Reads the file, applies overrides in order and validates the result.
RunConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides = {});

/// Every invariant violation, empty when the config is usable.
std::vector<std::string> violations(const RunConfig& config);
/// Throws ConfigError listing every violation.
void validate(const RunConfig& config);

/// Canonical text form; parse_config(to_text(c)) reproduces c exactly.
std::string to_text(const RunConfig& config);

/// Canonical text of one value. Throws ConfigError for unknown keys.
std::string value_text(const RunConfig& config, std::string_view key);

/// Names of all accepted keys in canonical order.
std::vector<std::string_view> keys();

geometry::RobotGeometry robot_geometry(const RunConfig& config);
head::HeadParams head_params(const RunConfig& config);
dynamics::SwimmerModel swimmer_model(const RunConfig& config);
sweep::SweepSettings sweep_settings(const RunConfig& config);

}  // namespace swimsim::config
