// Command-line front end over the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swimsim/swimsim.h"

namespace {

int exit_code(swimsim_status status) {
  switch (status) {
    case SWIMSIM_OK: return 0;
    case SWIMSIM_ERROR_CONFIG: return 2;
    case SWIMSIM_ERROR_NUMERICAL: return 3;
    default: return 1;
  }
}

const char* status_name(swimsim_status status) {
  switch (status) {
    case SWIMSIM_OK: return "ok";
    case SWIMSIM_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case SWIMSIM_ERROR_CONFIG: return "config_error";
    case SWIMSIM_ERROR_NUMERICAL: return "numerical_error";
    case SWIMSIM_ERROR_IO: return "io_error";
    case SWIMSIM_ERROR_INTERNAL: return "internal_error";
  }
  return "internal_error";
}

int report(swimsim_status status, const char* stage) {
  std::fprintf(stderr, "error: %s\nstage: %s\nstatus: %s\nexit: %d\n", swimsim_last_error(), stage,
               status_name(status), exit_code(status));
  return exit_code(status);
}

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
};

int execute(const std::string& mode, const Options& opt) {
  std::vector<std::string> assignments = opt.overrides;
  assignments.push_back("mode=" + mode);
  std::vector<const char*> argv;
  for (const auto& a : assignments) argv.push_back(a.c_str());

  swimsim_config* config = nullptr;
  swimsim_status status = opt.config.empty()
                              ? swimsim_config_parse("", argv.data(), argv.size(), &config)
                              : swimsim_config_load(opt.config.c_str(), argv.data(), argv.size(), &config);
  if (status != SWIMSIM_OK) return report(status, "config");

  std::string out_dir = opt.out;
  if (out_dir.empty()) {
    size_t needed = 0;
    swimsim_config_get_text(config, "output", nullptr, 0, &needed);
    std::string text(needed, '\0');
    swimsim_config_get_text(config, "output", text.data(), text.size(), nullptr);
    out_dir = text.c_str();
  }

  swimsim_result* result = nullptr;
  status = swimsim_run(config, out_dir.c_str(), &result);
  swimsim_config_free(config);
  if (status != SWIMSIM_OK) return report(status, "run");

  for (size_t i = 0; i < swimsim_result_count(result); ++i) {
    const char* key = nullptr;
    const char* value = nullptr;
    swimsim_result_entry(result, i, &key, &value);
    std::printf("%s = %s\n", key, value);
  }
  std::printf("table = %s\nsummary = %s\nconfig = %s\n", swimsim_result_table_path(result),
              swimsim_result_summary_path(result), swimsim_result_config_path(result));
  swimsim_result_free(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-flagellated swimmer simulation"};
  app.set_version_flag("--version", std::string(swimsim_version()));
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> modes{
      {"pivot", "Pitch-only simulation about the steering joint"},
      {"free", "Six-degree-of-freedom free swimming"},
      {"sweep", "Dimensionless thrust and torque over a design grid"},
      {"control", "Solve speeds for beta_ref and simulate the result"},
      {"calibrate", "Fit the linear thrust-speed maps"},
  };
  for (const auto& [name, help] : modes) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "Config file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (defaults to the config's output key)");
    sub->add_option("--override", opt.overrides, "key=value applied after the file, repeatable")
        ->allow_extra_args(false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto* sub : app.get_subcommands()) return execute(sub->get_name(), opt);
  return 2;
}
