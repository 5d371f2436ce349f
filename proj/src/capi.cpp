#include "swimsim/swimsim.h"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "swimsim/config.hpp"
#include "swimsim/control.hpp"
#include "swimsim/dynamics.hpp"
#include "swimsim/run.hpp"

struct swimsim_config {
  swimsim::config::RunConfig value;
};

struct swimsim_result {
  swimsim::app::RunReport report;
  std::string table_path;
  std::string summary_path;
  std::string config_path;
};

struct swimsim_pivot_sim {
  swimsim::dynamics::SwimmerModel model;
  swimsim::dynamics::ForceModel forces;
  swimsim::dynamics::PivotState state;
};

namespace {

thread_local std::string last_error;

swimsim_status fail(swimsim_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs f, translating exceptions into status codes. `invalid_as` is the code
// reported for InvalidArgument, which depends on where the bad value came from.
template <typename F>
swimsim_status guarded(F&& f, swimsim_status invalid_as = SWIMSIM_ERROR_INVALID_ARGUMENT) {
  try {
    f();
    last_error.clear();
    return SWIMSIM_OK;
  } catch (const swimsim::ConfigError& e) {
    return fail(SWIMSIM_ERROR_CONFIG, e.what());
  } catch (const swimsim::NumericalError& e) {
    return fail(SWIMSIM_ERROR_NUMERICAL, e.what());
  } catch (const swimsim::InvalidArgument& e) {
    return fail(invalid_as, e.what());
  } catch (const swimsim::IoError& e) {
    return fail(SWIMSIM_ERROR_IO, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SWIMSIM_ERROR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SWIMSIM_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SWIMSIM_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(SWIMSIM_ERROR_INTERNAL, "unknown error");
  }
}

std::vector<std::string> collect(const char* const* overrides, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    if (!overrides[i]) throw swimsim::ConfigError("null override");
    out.emplace_back(overrides[i]);
  }
  return out;
}

void copy_out(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (capacity) {
    const size_t n = std::min(capacity - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
  }
}

}  // namespace

extern "C" {

const char* swimsim_version(void) { return swimsim::version(); }

const char* swimsim_last_error(void) { return last_error.c_str(); }

swimsim_status swimsim_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                                   swimsim_config** out) {
  if (!path || !out || (n_overrides && !overrides)) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded(
      [&] {
        const auto list = collect(overrides, n_overrides);
        *out = new swimsim_config{swimsim::config::load_config(path, list)};
      },
      SWIMSIM_ERROR_CONFIG);
}

swimsim_status swimsim_config_parse(const char* text, const char* const* overrides, size_t n_overrides,
                                    swimsim_config** out) {
  if (!text || !out || (n_overrides && !overrides)) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded(
      [&] {
        auto config = swimsim::config::parse_config(text);
        for (const auto& o : collect(overrides, n_overrides)) swimsim::config::apply_override(config, o);
        swimsim::config::validate(config);
        *out = new swimsim_config{std::move(config)};
      },
      SWIMSIM_ERROR_CONFIG);
}

swimsim_status swimsim_config_set(swimsim_config* config, const char* assignment) {
  if (!config || !assignment) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    swimsim::config::RunConfig copy = config->value;
    swimsim::config::apply_override(copy, assignment);
    config->value = std::move(copy);
  });
}

swimsim_status swimsim_config_validate(const swimsim_config* config) {
  if (!config) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { swimsim::config::validate(config->value); });
}

swimsim_status swimsim_config_get(const swimsim_config* config, const char* key, double* value) {
  if (!config || !key || !value) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string text = swimsim::config::value_text(config->value, key);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0') throw swimsim::InvalidArgument("key '" + std::string(key) + "' is not numeric");
    *value = v;
  });
}

swimsim_status swimsim_config_get_text(const swimsim_config* config, const char* key, char* buffer,
                                       size_t capacity, size_t* needed) {
  if (!config || !key || (capacity && !buffer)) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { copy_out(swimsim::config::value_text(config->value, key), buffer, capacity, needed); });
}

swimsim_status swimsim_config_to_text(const swimsim_config* config, char* buffer, size_t capacity, size_t* needed) {
  if (!config || (capacity && !buffer)) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { copy_out(swimsim::config::to_text(config->value), buffer, capacity, needed); });
}

void swimsim_config_free(swimsim_config* config) { delete config; }

swimsim_status swimsim_run(const swimsim_config* config, const char* out_dir, swimsim_result** out) {
  if (!config || !out_dir || !out) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded(
      [&] {
        auto result = std::make_unique<swimsim_result>();
        result->report = swimsim::app::run(config->value, out_dir);
        result->table_path = result->report.table_file.string();
        result->summary_path = result->report.summary_file.string();
        result->config_path = result->report.config_file.string();
        *out = result.release();
      },
      SWIMSIM_ERROR_CONFIG);
}

size_t swimsim_result_count(const swimsim_result* result) { return result ? result->report.summary.size() : 0; }

swimsim_status swimsim_result_entry(const swimsim_result* result, size_t index, const char** key,
                                    const char** value) {
  if (!result || !key || !value) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  if (index >= result->report.summary.size()) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "index out of range");
  *key = result->report.summary[index].first.c_str();
  *value = result->report.summary[index].second.c_str();
  last_error.clear();
  return SWIMSIM_OK;
}

swimsim_status swimsim_result_get(const swimsim_result* result, const char* key, double* value) {
  if (!result || !key || !value) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  for (const auto& [k, v] : result->report.summary) {
    if (k != key) continue;
    char* end = nullptr;
    const double parsed = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "summary value is not numeric");
    *value = parsed;
    last_error.clear();
    return SWIMSIM_OK;
  }
  return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "no such summary key");
}

const char* swimsim_result_table_path(const swimsim_result* result) {
  return result ? result->table_path.c_str() : nullptr;
}

const char* swimsim_result_summary_path(const swimsim_result* result) {
  return result ? result->summary_path.c_str() : nullptr;
}

const char* swimsim_result_config_path(const swimsim_result* result) {
  return result ? result->config_path.c_str() : nullptr;
}

void swimsim_result_free(swimsim_result* result) { delete result; }

swimsim_status swimsim_solve_speeds(const swimsim_config* config, double beta_ref, double* omega1, double* omega2,
                                    double* beta_max) {
  if (!config || !omega1 || !omega2) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& c = config->value;
    const auto cal = swimsim::control::calibrate_propulsion(swimsim::config::robot_geometry(c), c.mu, c.omega_grid,
                                                            c.phases);
    const double limit = c.f_max > 0.0 ? c.f_max : swimsim::control::default_force_limit(cal, c.omega_max);
    try {
      const auto sol = swimsim::control::solve_speeds(beta_ref, cal, swimsim::config::head_params(c), c.d, limit);
      *omega1 = sol.omega1;
      *omega2 = sol.omega2;
      if (beta_max) *beta_max = sol.beta_max;
    } catch (const swimsim::control::InfeasibleReference& e) {
      if (beta_max) *beta_max = e.max_beta();
      throw;
    }
  });
}

swimsim_status swimsim_pivot_create(const swimsim_config* config, swimsim_pivot_sim** out) {
  if (!config || !out) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded(
      [&] {
        auto model = swimsim::config::swimmer_model(config->value);
        auto forces = swimsim::dynamics::rss_force_model(model.viscosity(), model.regularization());
        swimsim::dynamics::PivotState state;
        state.beta = config->value.beta0;
        *out = new swimsim_pivot_sim{std::move(model), std::move(forces), state};
      },
      SWIMSIM_ERROR_CONFIG);
}

swimsim_status swimsim_pivot_step(swimsim_pivot_sim* sim, double omega1, double omega2, double dt) {
  if (!sim) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto step = swimsim::dynamics::step_pivot(sim->state, sim->model, omega1, omega2, dt, sim->forces);
    sim->state = step.state;
  });
}

swimsim_status swimsim_pivot_state(const swimsim_pivot_sim* sim, double* t, double* beta, double* beta_dot) {
  if (!sim) return fail(SWIMSIM_ERROR_INVALID_ARGUMENT, "null argument");
  if (t) *t = sim->state.t;
  if (beta) *beta = sim->state.beta;
  if (beta_dot) *beta_dot = sim->state.beta_dot;
  last_error.clear();
  return SWIMSIM_OK;
}

void swimsim_pivot_free(swimsim_pivot_sim* sim) { delete sim; }

}  // extern "C"
