/*
 * relaybf: beamforming for two-hop MIMO relaying broadcast channels with
 * imperfect channel estimation.
 *
 * C interface over the C++ core. All objects are opaque handles created by a
 * *_create / *_from_* call and released by the matching *_destroy. Every
 * fallible call returns an rbf_status; on failure rbf_last_error() holds a
 * human-readable message for the calling thread.
 */
#ifndef RELAYBF_H
#define RELAYBF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RELAYBF_BUILDING)
#    define RBF_API __declspec(dllexport)
#  else
#    define RBF_API __declspec(dllimport)
#  endif
#else
#  define RBF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rbf_status {
    RBF_OK = 0,
    RBF_ERR_INVALID_ARGUMENT = 1, /* null handle/pointer, index out of range */
    RBF_ERR_CONFIG = 2,           /* configuration violates a model constraint */
    RBF_ERR_UNKNOWN_SCHEME = 3,
    RBF_ERR_UNKNOWN_PRESET = 4,
    RBF_ERR_PARSE = 5,            /* malformed config text or key=value */
    RBF_ERR_IO = 6,               /* unreadable input or unwritable output */
    RBF_ERR_NUMERIC = 7,          /* non-finite data, failed decomposition */
    RBF_ERR_DESIGN = 8,           /* beamformer not constructible (rank deficiency) */
    RBF_ERR_BUFFER_TOO_SMALL = 9,
    RBF_ERR_INTERNAL = 10
} rbf_status;

typedef enum rbf_format { RBF_FORMAT_CSV = 0, RBF_FORMAT_JSON = 1 } rbf_format;

typedef struct rbf_experiment_s* rbf_experiment;
typedef struct rbf_result_s* rbf_result;

/* One aggregated row. `scheme` stays valid until the result is destroyed. */
typedef struct rbf_result_row {
    double sweep_value;
    const char* scheme;
    double mean_metric;
    double stderr_metric;
    int trials;
    int excluded;
    double alpha_bc_mean;
    double alpha_fc_mean;
    int failed;
} rbf_result_row;

RBF_API const char* rbf_version(void);
RBF_API const char* rbf_status_string(rbf_status status);
RBF_API const char* rbf_last_error(void);

RBF_API size_t rbf_scheme_count(void);
RBF_API const char* rbf_scheme_name(size_t index);
RBF_API size_t rbf_preset_count(void);
RBF_API const char* rbf_preset_name(size_t index);

/* Experiments. A fresh experiment has the default SystemConfig and no grid. */
RBF_API rbf_status rbf_experiment_create(rbf_experiment* out);
RBF_API rbf_status rbf_experiment_from_preset(const char* name, rbf_experiment* out);
RBF_API rbf_status rbf_experiment_load_config(rbf_experiment exp, const char* path);
RBF_API rbf_status rbf_experiment_set(rbf_experiment exp, const char* key, const char* value);
/* Checks the base config alone (M,N >= K, positive powers, ...). */
RBF_API rbf_status rbf_experiment_validate_config(rbf_experiment exp);
/* Checks the full experiment: grid, schemes vs. every grid point. */
RBF_API rbf_status rbf_experiment_validate(rbf_experiment exp);
RBF_API rbf_status rbf_experiment_grid_size(rbf_experiment exp, size_t* points);
RBF_API rbf_status rbf_experiment_run(rbf_experiment exp, rbf_result* out);
RBF_API void rbf_experiment_destroy(rbf_experiment exp);

/* Results. */
RBF_API rbf_status rbf_result_row_count(rbf_result res, size_t* count);
RBF_API rbf_status rbf_result_get_row(rbf_result res, size_t index, rbf_result_row* row);
RBF_API rbf_status rbf_result_write(rbf_result res, const char* path, rbf_format format);
/* Copies the serialized table into buf (NUL-terminated). *needed receives the
 * required size including the terminator; buf may be NULL to query it. */
RBF_API rbf_status rbf_result_serialize(rbf_result res, rbf_format format, char* buf,
                                        size_t capacity, size_t* needed);
RBF_API void rbf_result_destroy(rbf_result res);

/* Single realization: per-user SINR of `scheme` for the experiment's base
 * config and the given seed. *users receives K; RBF_ERR_BUFFER_TOO_SMALL if
 * capacity < K. */
RBF_API rbf_status rbf_evaluate(rbf_experiment exp, const char* scheme, uint64_t seed,
                                double* sinr, size_t capacity, size_t* users);

#ifdef __cplusplus
}
#endif

#endif /* RELAYBF_H */
