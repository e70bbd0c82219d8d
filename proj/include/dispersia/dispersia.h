#ifndef DISPERSIA_DISPERSIA_H
#define DISPERSIA_DISPERSIA_H

/* C interface to libdispersia. Every call returns a status; on failure the
   message (and, for config errors, the line) is available from
   dsp_last_error() / dsp_last_error_line() on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DSP_API __declspec(dllexport)
#else
#define DSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  DSP_OK = 0,
  DSP_INVALID_ARGUMENT = 1,
  DSP_CONFIG_ERROR = 2,
  DSP_NUMERIC_ERROR = 3,
  DSP_IO_ERROR = 4,
  DSP_INTERNAL_ERROR = 5
} dsp_status;

DSP_API const char* dsp_version(void);
DSP_API const char* dsp_last_error(void);
DSP_API int dsp_last_error_line(void);
/* Step index of the last DSP_NUMERIC_ERROR, or -1. */
DSP_API long long dsp_last_error_step(void);

/* shape: "ball", "cube", "shell" or "annulus" (width used by annulus only). */
DSP_API dsp_status dsp_lattice_count(int d, double N, const char* shape, double width, uint64_t* count);
DSP_API dsp_status dsp_count_representations(int d, int64_t R, uint64_t* count);
DSP_API dsp_status dsp_average_representation(int d, int64_t R, uint64_t* total, uint64_t* max);

typedef struct dsp_state dsp_state;

DSP_API dsp_status dsp_state_create(int d, dsp_state** out);
DSP_API void dsp_state_destroy(dsp_state* state);
/* k points to d coordinates. */
DSP_API dsp_status dsp_state_set(dsp_state* state, const int64_t* k, double re, double im);
DSP_API dsp_status dsp_state_get(const dsp_state* state, const int64_t* k, double* re, double* im);
DSP_API dsp_status dsp_state_size(const dsp_state* state, size_t* size);
DSP_API dsp_status dsp_state_norm(const dsp_state* state, double* norm);
/* propagator: "fractional_schrodinger" (param = alpha), "klein_gordon"
   (param = mass) or "wave" (param ignored). */
DSP_API dsp_status dsp_state_evolve(const dsp_state* state, double t, const char* propagator, double param,
                                    dsp_state** out);
/* The returned string must be released with dsp_string_free. */
DSP_API dsp_status dsp_state_to_json(const dsp_state* state, char** json);
DSP_API dsp_status dsp_state_from_json(const char* json, dsp_state** out);
DSP_API void dsp_string_free(char* s);

/* Column-major rows x cols matrix (im may be NULL). beta may be INFINITY. */
DSP_API dsp_status dsp_schatten_norm(const double* re, const double* im, size_t rows, size_t cols, double beta,
                                     double* norm);
DSP_API dsp_status dsp_fit_exponent(const double* N, const double* values, size_t n, double* slope,
                                    double* intercept, double* max_residual);

typedef struct dsp_report dsp_report;

/* output_dir and seed may be NULL to keep the config values. */
DSP_API dsp_status dsp_run_config(const char* path, const char* output_dir, const uint64_t* seed, dsp_report** out);
DSP_API dsp_status dsp_hartree_run(const char* path, const char* output_dir, dsp_report** out);
DSP_API int dsp_report_all_pass(const dsp_report* report);
DSP_API size_t dsp_report_failure_count(const dsp_report* report);
DSP_API const char* dsp_report_failure(const dsp_report* report, size_t i);
DSP_API const char* dsp_report_output_dir(const dsp_report* report);
DSP_API void dsp_report_destroy(dsp_report* report);

/* Writes the canonical FourierState fixtures into dir. */
DSP_API dsp_status dsp_fixtures_emit(const char* dir, size_t* count);

#ifdef __cplusplus
}
#endif

#endif
