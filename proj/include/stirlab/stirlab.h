#ifndef STIRLAB_STIRLAB_H
#define STIRLAB_STIRLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(STIRLAB_BUILDING_LIBRARY)
#    define STIRLAB_API __declspec(dllexport)
#  else
#    define STIRLAB_API __declspec(dllimport)
#  endif
#else
#  define STIRLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stirlab_status {
    STIRLAB_OK = 0,
    STIRLAB_E_ARGUMENT = 1,   /* null handle or bad argument */
    STIRLAB_E_PARAMETER = 2,  /* value out of range */
    STIRLAB_E_GENERATION = 3, /* trajectory generation gave up */
    STIRLAB_E_INIT = 4,       /* scene could not be initialised */
    STIRLAB_E_FIT = 5,        /* regression failed */
    STIRLAB_E_STATE = 6,      /* call not valid in the current state */
    STIRLAB_E_CONFIG = 7,
    STIRLAB_E_FORMAT = 8,     /* malformed input text */
    STIRLAB_E_IO = 9,
    STIRLAB_E_INTERNAL = 10
} stirlab_status;

typedef enum stirlab_outcome {
    STIRLAB_COMPLETED = 0,
    STIRLAB_FAILED_INITIATION = 1,
    STIRLAB_TIMED_OUT = 2
} stirlab_outcome;

typedef struct stirlab_config stirlab_config;
typedef struct stirlab_coefficients stirlab_coefficients;
typedef struct stirlab_controller stirlab_controller;

#define STIRLAB_FEATURES 6
#define STIRLAB_TERMS 28

STIRLAB_API const char* stirlab_version(void);
STIRLAB_API const char* stirlab_status_name(stirlab_status status);

/* Message of the last failed call on this thread; "" if none. */
STIRLAB_API const char* stirlab_last_error(void);

/* Configuration */
STIRLAB_API stirlab_status stirlab_config_new(stirlab_config** out);
STIRLAB_API stirlab_status stirlab_config_load(const char* path, stirlab_config** out);
STIRLAB_API stirlab_status stirlab_config_set(stirlab_config* cfg, const char* key, const char* value);

/* Text getters copy into buf (NUL-terminated, truncated to cap) and report the
   full length, excluding the terminator, through *needed when non-null. */
STIRLAB_API stirlab_status stirlab_config_get(const stirlab_config* cfg, const char* key, char* buf, size_t cap,
                                              size_t* needed);
STIRLAB_API stirlab_status stirlab_config_dump(const stirlab_config* cfg, char* buf, size_t cap, size_t* needed);
STIRLAB_API void stirlab_config_free(stirlab_config* cfg);

/* Time-parameterised waypoints of one trajectory as "x y t" rows. path "-"
   writes to stdout. */
STIRLAB_API stirlab_status stirlab_write_trajectory(const stirlab_config* cfg, const char* kind, uint64_t seed,
                                                    double speed_scale, double dt, const char* path);

/* Confidence model */
STIRLAB_API stirlab_status stirlab_calibrate(const stirlab_config* cfg, uint64_t seed, stirlab_coefficients** out,
                                             double* heldout_r2);
STIRLAB_API stirlab_status stirlab_coefficients_load(const char* path, stirlab_coefficients** out);
STIRLAB_API stirlab_status stirlab_coefficients_save(const stirlab_coefficients* coef, const char* path);

/* Standardised-space coefficients in design-row order, and the residual std. */
STIRLAB_API stirlab_status stirlab_coefficients_get(const stirlab_coefficients* coef, double beta[STIRLAB_TERMS],
                                                    double* residual_std);
STIRLAB_API stirlab_status stirlab_predict(const stirlab_coefficients* coef, const double x[STIRLAB_FEATURES],
                                           double* out);
STIRLAB_API void stirlab_coefficients_free(stirlab_coefficients* coef);

/* Counting metrics */
STIRLAB_API stirlab_status stirlab_counting_error(long gt_real, long tp, long* out);
STIRLAB_API stirlab_status stirlab_counting_confidence(long tp, long fp, long fn, double* out);

/* Experiments. out_dir is created if needed. */
STIRLAB_API stirlab_status stirlab_run_selection(const stirlab_config* cfg, const char* out_dir);
STIRLAB_API stirlab_status stirlab_run_speed(const stirlab_config* cfg, const stirlab_coefficients* coef,
                                             const char* out_dir);
STIRLAB_API stirlab_status stirlab_replay_file(const stirlab_config* cfg, const char* in_path, const char* out_path);
STIRLAB_API stirlab_status stirlab_report(const char* in_dir, const char* out_dir);

/* Controller */
STIRLAB_API stirlab_status stirlab_controller_new(const stirlab_config* cfg, stirlab_controller** out);
STIRLAB_API stirlab_status stirlab_controller_step(stirlab_controller* ctl, double confidence, int* stop,
                                                   double* speed);
STIRLAB_API stirlab_status stirlab_controller_outcome(const stirlab_controller* ctl, stirlab_outcome* out);
STIRLAB_API void stirlab_controller_free(stirlab_controller* ctl);

#ifdef __cplusplus
}
#endif

#endif
