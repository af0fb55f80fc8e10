/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the dsr library: Dirichlet-series coefficient recovery and
 * initial-datum inversion for the fractional heat equation.
 *
 * Every call returns a dsr_status. On failure the message is available from
 * dsr_last_error() on the calling thread until the next failing call.
 * Strings returned through char** are owned by the caller; release them with
 * dsr_string_free. Reals cross the boundary as decimal strings.
 */
#ifndef DSR_DSR_H
#define DSR_DSR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DSR_API __declspec(dllexport)
#else
#define DSR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsr_status {
  DSR_OK = 0,
  DSR_INVALID_ARGUMENT = 1,
  DSR_DOMAIN = 2,
  DSR_STRUCTURAL = 3,
  DSR_ILL_CONDITIONED = 4,
  DSR_PRECISION = 5,
  DSR_REFUSED = 6,
  DSR_INTERPOLATION = 7,
  DSR_IO = 8,
  DSR_INTERNAL = 100
} dsr_status;

/* Overrides applied on top of a JSON config; zero-initialize for none. */
typedef struct dsr_options {
  int precision_bits; /* 0: keep the config's value (default 256) */
  int has_seed;
  uint64_t seed;
  int threads; /* 0: keep the config's value */
} dsr_options;

DSR_API const char* dsr_version(void);
DSR_API const char* dsr_last_error(void);
DSR_API const char* dsr_status_name(dsr_status s);
DSR_API void dsr_string_free(char* s);

/* Working precision of the calling thread, in bits. */
DSR_API dsr_status dsr_set_precision(int bits);
DSR_API int dsr_get_precision(void);

/* Exponent sequences. */
typedef struct dsr_eigen dsr_eigen;
DSR_API dsr_status dsr_eigen_power(const char* alpha, const char* mu, size_t count, dsr_eigen** out);
DSR_API dsr_status dsr_eigen_from_json(const char* json, dsr_eigen** out);
DSR_API size_t dsr_eigen_size(const dsr_eigen* s);
DSR_API dsr_status dsr_eigen_value(const dsr_eigen* s, size_t k, char** out);
DSR_API dsr_status dsr_eigen_to_json(const dsr_eigen* s, char** out);
DSR_API void dsr_eigen_free(dsr_eigen* s);

/* Biorthogonal families on (0, T). */
typedef struct dsr_family dsr_family;
DSR_API dsr_status dsr_family_build(const dsr_eigen* s, const char* T, size_t N, int precision_bits,
                                    dsr_family** out);
DSR_API dsr_status dsr_family_residual(const dsr_family* f, char** out);
DSR_API dsr_status dsr_family_psi_norm(const dsr_family* f, size_t n, char** out);
DSR_API dsr_status dsr_family_to_json(const dsr_family* f, char** out);
DSR_API void dsr_family_free(dsr_family* f);

/* Sensor points x0 in (0, mu pi); expr as accepted by the sensor parser ("golden", "pi/3", ...). */
typedef struct dsr_sensor dsr_sensor;
DSR_API dsr_status dsr_sensor_new(const char* expr, const char* mu, dsr_sensor** out);
DSR_API dsr_status dsr_sensor_verify(const dsr_sensor* p, size_t K, int* pass, char** report_json);
DSR_API void dsr_sensor_free(dsr_sensor* p);

/* JSON drivers (configuration formats are documented in README.md). */
DSR_API dsr_status dsr_forward(const char* config_json, const dsr_options* opt, const char* out_csv_path,
                               char** summary_json);
DSR_API dsr_status dsr_recover(const char* config_json, const dsr_options* opt, char** report_json);
DSR_API dsr_status dsr_sensor_check(const char* expr, const char* mu, size_t K, const dsr_options* opt,
                                    char** report_json);
DSR_API dsr_status dsr_experiment(const char* config_json, const dsr_options* opt, const char* out_csv_path,
                                  char** summary_json);
DSR_API dsr_status dsr_fit(const char* records_csv_path, const char* model, char** fit_json);

#ifdef __cplusplus
}
#endif

#endif /* DSR_DSR_H */
