/* Spiral scattering transform: C interface.
 *
 * All objects are opaque and owned by the caller once returned; release them
 * with the matching *_free function. Functions report failures through
 * spiral_status and leave a message in spiral_last_error() (per thread).
 * Strings returned through char** out-parameters must be released with
 * spiral_string_free.
 */
#ifndef SPIRAL_SPIRAL_H
#define SPIRAL_SPIRAL_H

#include <stddef.h>

#if defined(SPIRAL_BUILDING_LIBRARY)
#define SPIRAL_API __attribute__((visibility("default")))
#else
#define SPIRAL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spiral_status {
    SPIRAL_OK = 0,
    SPIRAL_ERR_PARAM = 2,
    SPIRAL_ERR_IO = 3,
    SPIRAL_ERR_FIT = 4,
    SPIRAL_ERR_INTERNAL = 5,
    SPIRAL_ERR_WAV_MALFORMED = 6,
    SPIRAL_ERR_WAV_UNSUPPORTED = 7
} spiral_status;

typedef struct spiral_config spiral_config;
typedef struct spiral_signal spiral_signal;
typedef struct spiral_tensor spiral_tensor;

SPIRAL_API const char* spiral_version(void);
SPIRAL_API const char* spiral_last_error(void);
/* Newline-separated warnings from the last call on this thread, or "". */
SPIRAL_API const char* spiral_last_warnings(void);
SPIRAL_API void spiral_string_free(char* s);

/* Run configuration (Q, J, T, sample_rate, hop, alpha_min, beta_resolutions,
 * gamma_resolutions, transform_kind, input, synth, output, format). */
SPIRAL_API spiral_status spiral_config_new(spiral_config** out);
SPIRAL_API spiral_status spiral_config_from_json(const char* json, spiral_config** out);
SPIRAL_API spiral_status spiral_config_to_json(const spiral_config* cfg, char** out_json);
/* value_json is a JSON literal, e.g. "16", "[0.25,0.5]" or "\"joint\"". */
SPIRAL_API spiral_status spiral_config_set(spiral_config* cfg, const char* key, const char* value_json);
SPIRAL_API void spiral_config_free(spiral_config* cfg);

SPIRAL_API spiral_status spiral_signal_read_wav(const char* path, spiral_signal** out);
SPIRAL_API spiral_status spiral_signal_from_samples(const double* samples, size_t n, double sample_rate,
                                                    spiral_signal** out);
/* Source-filter or comb spec as JSON; analysis Q and J are taken from cfg (may be NULL). */
SPIRAL_API spiral_status spiral_signal_synthesize(const spiral_config* cfg, const char* spec_json,
                                                  spiral_signal** out);
/* Loads cfg's input: the synth spec when present, the WAV path otherwise. */
SPIRAL_API spiral_status spiral_signal_from_config(const spiral_config* cfg, spiral_signal** out);
SPIRAL_API spiral_status spiral_signal_write_wav(const spiral_signal* sig, const char* path, int float32);
SPIRAL_API size_t spiral_signal_length(const spiral_signal* sig);
SPIRAL_API double spiral_signal_sample_rate(const spiral_signal* sig);
SPIRAL_API const double* spiral_signal_data(const spiral_signal* sig);
SPIRAL_API void spiral_signal_free(spiral_signal* sig);

/* x1, or S1 when averaged != 0. Tensor is [frames x lambda1]. */
SPIRAL_API spiral_status spiral_scalogram(const spiral_config* cfg, const spiral_signal* sig, int averaged,
                                          spiral_tensor** out);
/* Second order of cfg's transform_kind, or S2 when averaged != 0.
 * Tensor is [paths x (4 + frames)]: lambda1_hz, alpha, beta, gamma, series. */
SPIRAL_API spiral_status spiral_scatter(const spiral_config* cfg, const spiral_signal* sig, int averaged,
                                        spiral_tensor** out);
SPIRAL_API size_t spiral_tensor_ndim(const spiral_tensor* t);
SPIRAL_API size_t spiral_tensor_dim(const spiral_tensor* t, size_t axis);
SPIRAL_API const double* spiral_tensor_data(const spiral_tensor* t);
/* format: "csv", "bin", "pgm" or "json"; inverted flips pgm gray levels. */
SPIRAL_API spiral_status spiral_tensor_write(const spiral_tensor* t, const char* format, const char* path,
                                             int inverted);
SPIRAL_API void spiral_tensor_free(spiral_tensor* t);

/* JSON reports. */
SPIRAL_API spiral_status spiral_validate_plane(const spiral_config* cfg, const spiral_signal* sig,
                                               char** out_json);
SPIRAL_API spiral_status spiral_validate_harmonicity(const spiral_config* cfg, const spiral_signal* sig,
                                                     char** out_json);
SPIRAL_API spiral_status spiral_validate_spin(const spiral_config* cfg, const spiral_signal* sig, double t0,
                                              double t1, char** out_json);
SPIRAL_API spiral_status spiral_frame_check(const spiral_config* cfg, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
