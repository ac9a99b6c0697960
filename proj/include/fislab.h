/* fislab C API: feature-importance stability laboratory.
 *
 * All entry points take JSON configuration strings (the same schema the CLI
 * consumes), write report bundles to the configured output directory, and
 * return status codes. fislab_last_error() carries the detail message of the
 * calling thread's most recent failure. Strings returned through out
 * parameters are heap-allocated; release them with fislab_string_free().
 */

#ifndef FISLAB_H
#define FISLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FISLAB_API __declspec(dllexport)
#else
#define FISLAB_API __attribute__((visibility("default")))
#endif

typedef enum fislab_status {
  FISLAB_OK = 0,
  FISLAB_ERROR_INVALID_ARGUMENT = 1,
  FISLAB_ERROR_PARSE = 2,
  FISLAB_ERROR_IO = 3,
  FISLAB_ERROR_DOMAIN = 4,
  FISLAB_ERROR_CLASS_EXHAUSTION = 5,
  FISLAB_ERROR_INTERNAL = 6
} fislab_status;

FISLAB_API const char* fislab_version(void);
FISLAB_API const char* fislab_status_name(fislab_status status);

/* Thread-local message describing this thread's last failing call. */
FISLAB_API const char* fislab_last_error(void);

FISLAB_API void fislab_string_free(char* s);

/* ---- datasets (opaque handle) ---- */

typedef struct fislab_dataset fislab_dataset;

/* spec_json: {"n_features", "n_samples", "positive_fraction", "seed",
 * optional "coefficients", optional "threshold"}. */
FISLAB_API fislab_status fislab_dataset_generate(const char* spec_json,
                                                 fislab_dataset** out);

/* options_json (nullable): {"categorical": "reject|ordinal|one_hot",
 * "missing": "reject|impute_median"}. */
FISLAB_API fislab_status fislab_dataset_load_csv(const char* path,
                                                 const char* label_column,
                                                 const char* options_json,
                                                 fislab_dataset** out);

FISLAB_API fislab_status fislab_dataset_write_csv(const fislab_dataset* dataset,
                                                  const char* path,
                                                  const char* label_column);

FISLAB_API size_t fislab_dataset_n_samples(const fislab_dataset* dataset);
FISLAB_API size_t fislab_dataset_n_features(const fislab_dataset* dataset);
FISLAB_API size_t fislab_dataset_n_positive(const fislab_dataset* dataset);

FISLAB_API void fislab_dataset_free(fislab_dataset* dataset);

/* ---- pipelines ----
 *
 * config_json follows the documented run-config schema. threads sets the
 * worker count and never changes the produced bytes. On success, when
 * manifest_json_out is non-NULL it receives the bundle manifest. */

FISLAB_API fislab_status fislab_run_pipeline(const char* config_json, int threads,
                                             char** manifest_json_out);

FISLAB_API fislab_status fislab_sweep_correlation(const char* config_json, int threads,
                                                  char** manifest_json_out);

FISLAB_API fislab_status fislab_theory_report(const char* config_json,
                                              char** manifest_json_out);

/* Re-renders charts from an existing bundle directory. formats is a
 * comma-separated list (currently only "svg" produces output). */
FISLAB_API fislab_status fislab_render_report(const char* bundle_dir,
                                              const char* formats,
                                              char** files_json_out);

#ifdef __cplusplus
}
#endif

#endif /* FISLAB_H */
