#pragma once

// Experiment orchestration and result files.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swimsim/config.hpp"
#include "swimsim/dynamics.hpp"

namespace swimsim::app {

inline constexpr int kSchemaVersion = 1;

inline constexpr std::string_view kConfigFile = "resolved.cfg";
inline constexpr std::string_view kSummaryFile = "summary.csv";

/// Column headers, SI units in brackets.
std::string trajectory_header(dynamics::Mode mode);
std::string sweep_header();
std::string calibration_header();
std::string summary_header();

struct RunReport {
  std::filesystem::path config_file;
  std::filesystem::path table_file;
  std::filesystem::path summary_file;
  std::vector<std::pair<std::string, std::string>> summary;  // key, value
};

/// Runs the configured mode and writes resolved.cfg, the table and
/// summary.csv into `out_dir`, creating it when needed. The config must
/// already be valid.
RunReport run(const config::RunConfig& config, const std::filesystem::path& out_dir);

/// Name of the table file written for a mode.
std::string_view table_file_name(config::RunMode mode);

}  // namespace swimsim::app
