/* C interface to the kgsq simulation and analysis library.
 *
 * All entry points are thread-compatible: distinct threads may operate on
 * distinct handles concurrently.  Error messages are per-thread; call
 * kgsq_last_error() on the thread that observed the failure.
 */
#ifndef KGSQ_H
#define KGSQ_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct kgsq_config kgsq_config;

typedef enum kgsq_status {
    KGSQ_OK = 0,
    KGSQ_ERR_CONFIG = 1, /* bad config file, key, value, or argument */
    KGSQ_ERR_BLOWUP = 2, /* blow-up guard tripped; partial outputs exist */
    KGSQ_ERR_BUDGET = 3  /* quadrature budget exhausted */
} kgsq_status;

/* Library version, e.g. "1.0.0".  Static storage; do not free. */
const char* kgsq_version(void);

/* Message for the most recent failure on this thread, or "" if none. */
const char* kgsq_last_error(void);

/* Parses a config file / config text into a new handle.  On success stores
 * the handle in *out and returns KGSQ_OK; on failure *out is NULL. */
kgsq_status kgsq_config_load(const char* path, kgsq_config** out);
kgsq_status kgsq_config_parse(const char* text, kgsq_config** out);

/* Creates a handle holding every default. */
kgsq_status kgsq_config_new(kgsq_config** out);

/* Sets one key, named as in the config file: "seed", "output.dir", ... */
kgsq_status kgsq_config_set(kgsq_config* cfg, const char* key,
                            const char* value);

/* Canonical config text; free with kgsq_string_free.  NULL on failure. */
char* kgsq_config_serialize(const kgsq_config* cfg);

void kgsq_string_free(char* s);
void kgsq_config_free(kgsq_config* cfg);

/* Commands.  out_dir overrides the config's output.dir when non-NULL and
 * non-empty; threads < 1 means 1.  Return value doubles as the recommended
 * process exit code. */
kgsq_status kgsq_run_simulate(const kgsq_config* cfg, const char* out_dir,
                              int threads);
kgsq_status kgsq_run_analyze_covariance(const kgsq_config* cfg,
                                        const char* out_dir, int threads);
kgsq_status kgsq_run_convergence_study(const kgsq_config* cfg,
                                       const char* out_dir, int threads);
kgsq_status kgsq_run_stability(const kgsq_config* cfg, const char* out_dir,
                               int threads);
kgsq_status kgsq_run_trilinear(const kgsq_config* cfg, const char* out_dir,
                               int threads);
kgsq_status kgsq_run_sample_noise(const kgsq_config* cfg, const char* out_dir,
                                  int threads);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KGSQ_H */
