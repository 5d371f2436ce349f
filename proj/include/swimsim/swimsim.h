/* C interface to the swimsim library. */
#ifndef SWIMSIM_SWIMSIM_H
#define SWIMSIM_SWIMSIM_H

#include <stddef.h>

#if defined(SWIMSIM_BUILDING_LIBRARY)
#define SWIMSIM_API __attribute__((visibility("default")))
#else
#define SWIMSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swimsim_status {
  SWIMSIM_OK = 0,
  SWIMSIM_ERROR_INVALID_ARGUMENT = 1,
  SWIMSIM_ERROR_CONFIG = 2,
  SWIMSIM_ERROR_NUMERICAL = 3,
  SWIMSIM_ERROR_IO = 4,
  SWIMSIM_ERROR_INTERNAL = 5
} swimsim_status;

typedef struct swimsim_config swimsim_config;
typedef struct swimsim_result swimsim_result;
typedef struct swimsim_pivot_sim swimsim_pivot_sim;

SWIMSIM_API const char* swimsim_version(void);

/* Message of the last failed call on this thread, "" if none. */
SWIMSIM_API const char* swimsim_last_error(void);

/* Reads a config file, applies `key=value` overrides in order, validates. */
SWIMSIM_API swimsim_status swimsim_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                                               swimsim_config** out);
/* Same as swimsim_config_load but from text held in memory. */
SWIMSIM_API swimsim_status swimsim_config_parse(const char* text, const char* const* overrides,
                                                size_t n_overrides, swimsim_config** out);
SWIMSIM_API swimsim_status swimsim_config_set(swimsim_config* config, const char* assignment);
SWIMSIM_API swimsim_status swimsim_config_validate(const swimsim_config* config);
SWIMSIM_API swimsim_status swimsim_config_get(const swimsim_config* config, const char* key, double* value);
/* Canonical text of one value, with the same buffer rules as
   swimsim_config_to_text. */
SWIMSIM_API swimsim_status swimsim_config_get_text(const swimsim_config* config, const char* key, char* buffer,
                                                   size_t capacity, size_t* needed);
/* Canonical text. Writes at most `capacity` bytes including the terminator;
   `needed` receives the full size including the terminator. */
SWIMSIM_API swimsim_status swimsim_config_to_text(const swimsim_config* config, char* buffer, size_t capacity,
                                                  size_t* needed);
SWIMSIM_API void swimsim_config_free(swimsim_config* config);

/* Runs the configured mode and writes its files into out_dir. */
SWIMSIM_API swimsim_status swimsim_run(const swimsim_config* config, const char* out_dir, swimsim_result** out);
SWIMSIM_API size_t swimsim_result_count(const swimsim_result* result);
SWIMSIM_API swimsim_status swimsim_result_entry(const swimsim_result* result, size_t index, const char** key,
                                                const char** value);
SWIMSIM_API swimsim_status swimsim_result_get(const swimsim_result* result, const char* key, double* value);
SWIMSIM_API const char* swimsim_result_table_path(const swimsim_result* result);
SWIMSIM_API const char* swimsim_result_summary_path(const swimsim_result* result);
SWIMSIM_API const char* swimsim_result_config_path(const swimsim_result* result);
SWIMSIM_API void swimsim_result_free(swimsim_result* result);

/* Calibrates the thrust maps for the config's geometry and returns the speed
   pair holding beta_ref (rad). On SWIMSIM_ERROR_NUMERICAL for an unreachable
   reference, beta_max still receives the largest reachable pitch. */
SWIMSIM_API swimsim_status swimsim_solve_speeds(const swimsim_config* config, double beta_ref, double* omega1,
                                                double* omega2, double* beta_max);

/* Stepwise pivot simulation with the RSS force model. */
SWIMSIM_API swimsim_status swimsim_pivot_create(const swimsim_config* config, swimsim_pivot_sim** out);
SWIMSIM_API swimsim_status swimsim_pivot_step(swimsim_pivot_sim* sim, double omega1, double omega2, double dt);
SWIMSIM_API swimsim_status swimsim_pivot_state(const swimsim_pivot_sim* sim, double* t, double* beta,
                                               double* beta_dot);
SWIMSIM_API void swimsim_pivot_free(swimsim_pivot_sim* sim);

#ifdef __cplusplus
}
#endif

#endif
