#ifndef HDX_H
#define HDX_H

/* C interface to the hdx library. Handles are opaque; every call that can
 * fail returns an hdx_status, and hdx_last_error() describes the most recent
 * failure on the calling thread. Strings returned through char** outputs are
 * owned by the caller and released with hdx_string_free(). */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hdx_complex hdx_complex;
typedef struct hdx_function hdx_function;

/* Non-zero values double as CLI exit codes. */
typedef enum hdx_status {
  HDX_OK = 0,
  HDX_CHECKS_FAILED = 1,
  HDX_INVALID_ARGUMENT = 2,
  HDX_INFEASIBLE = 3,
  HDX_NUMERICAL = 4,
  HDX_IO = 5,
  HDX_INTERNAL = 6
} hdx_status;

const char* hdx_last_error(void);
void hdx_string_free(char* s);
const char* hdx_version(void);

/* spec_json: {"generator": "complete"|"hypercube"|"random"|"anti_tribes"|"file", ...}. */
hdx_status hdx_complex_generate(const char* spec_json, hdx_complex** out);
hdx_status hdx_complex_load(const char* path, hdx_complex** out);
hdx_status hdx_complex_save(const hdx_complex* complex, const char* path);
/* The complex file text. */
hdx_status hdx_complex_write(const hdx_complex* complex, char** text);
/* {"dimension", "levels": [...sizes], "vertex_bound"}. */
hdx_status hdx_complex_info(const hdx_complex* complex, char** json);
void hdx_complex_free(hdx_complex* complex);

/* spec_json: {"generator": "constant"|"random_sparse"|..., "level": k, ...}. */
hdx_status hdx_function_generate(const hdx_complex* complex, const char* spec_json, hdx_function** out);
hdx_status hdx_function_load(const hdx_complex* complex, const char* path, hdx_function** out);
hdx_status hdx_function_save(const hdx_function* f, const char* path);
void hdx_function_free(hdx_function* f);

/* basis: "bottom_up" or "hd_level_set". Emits the decomposition and its norm report. */
hdx_status hdx_decompose(const hdx_function* f, const char* basis, char** json);

/* Link spectra and gamma; when walk_json is non-null the walk's strips at
 * `level` are added. */
hdx_status hdx_spectrum(const hdx_complex* complex, const char* walk_json, int level, int jobs, char** json);

/* Runs an experiment config. overrides_json may carry seed, jobs, out and
 * samples, which take precedence over the config. Returns HDX_OK when every
 * pass/fail verdict passed, HDX_CHECKS_FAILED otherwise; summary is always
 * written on those two outcomes. */
hdx_status hdx_run(const char* config_json, const char* overrides_json, char** summary);

#ifdef __cplusplus
}
#endif

#endif
