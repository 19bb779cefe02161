#ifndef PFSIM_H
#define PFSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PfsimStatus {
  PFSIM_STATUS_OK = 0,
  PFSIM_STATUS_NULL_POINTER = 1,
  PFSIM_STATUS_INVALID_ARGUMENT = 2,
  PFSIM_STATUS_INVALID_CONFIG = 3,
  PFSIM_STATUS_PARSE = 4,
  PFSIM_STATUS_DIGEST_MISMATCH = 5,
  PFSIM_STATUS_NUMERIC = 6,
  PFSIM_STATUS_IO = 7,
  PFSIM_STATUS_PANIC = 8,
} PfsimStatus;

/**
 * Run configuration.
 */
typedef struct PfsimConfig PfsimConfig;

/**
 * Precomputed density model and sampling tables for one configuration.
 */
typedef struct PfsimModel PfsimModel;

/**
 * Events and summary of a finished simulation.
 */
typedef struct PfsimRun PfsimRun;

typedef struct PfsimEvent {
  uint64_t particle_id;
  /**
   * 1 or 2.
   */
  uint8_t slit_index;
  double y_eps_m;
  double theta_rad;
  double y_det_m;
  double x_det_m;
} PfsimEvent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *pfsim_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void pfsim_string_free(char *s);

/**
 * Parses a JSON configuration document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PfsimStatus pfsim_config_from_json(const char *json, struct PfsimConfig **out);

/**
 * Bundled electron configuration.
 *
 * # Safety
 * `out` must be writable.
 */
enum PfsimStatus pfsim_config_electron(struct PfsimConfig **out);

/**
 * Bundled neon configuration.
 *
 * # Safety
 * `out` must be writable.
 */
enum PfsimStatus pfsim_config_neon(struct PfsimConfig **out);

/**
 * # Safety
 * `config` must be NULL or a handle from this library, not yet freed.
 */
void pfsim_config_free(struct PfsimConfig *config);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum PfsimStatus pfsim_config_set_seed(struct PfsimConfig *config, uint64_t seed);

/**
 * # Safety
 * `config` must be a live handle.
 */
enum PfsimStatus pfsim_config_set_particles(struct PfsimConfig *config, uint64_t n_particles);

/**
 * Configuration digest as 16 hex digits; free with [`pfsim_string_free`].
 *
 * # Safety
 * `config` must be a live handle; `out` must be writable.
 */
enum PfsimStatus pfsim_config_digest(const struct PfsimConfig *config, char **out);

/**
 * Whether the slit width respects `a ≥ 3λ₀/(2π)`; writes 1 or 0.
 *
 * # Safety
 * `config` must be a live handle; `passes` must be writable.
 */
enum PfsimStatus pfsim_config_slit_width_ok(const struct PfsimConfig *config, uint8_t *passes);

/**
 * Builds the density model and sampling tables.
 *
 * # Safety
 * `config` must be a live handle; `out` must be writable.
 */
enum PfsimStatus pfsim_model_new(const struct PfsimConfig *config, struct PfsimModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from this library, not yet freed.
 */
void pfsim_model_free(struct PfsimModel *model);

/**
 * Normalised angular density at `theta` (1/rad); 0 outside ±θmax.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum PfsimStatus pfsim_model_density(const struct PfsimModel *model, double theta, double *out);

/**
 * Expected density of detected positions on the screen at `y` (1/m).
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum PfsimStatus pfsim_model_screen_density(const struct PfsimModel *model, double y, double *out);

/**
 * Generates the events of the model's configuration and summarises them.
 * `workers` = 0 picks the available parallelism; the result does not
 * depend on it.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum PfsimStatus pfsim_simulate(const struct PfsimModel *model,
                                size_t workers,
                                struct PfsimRun **out);

/**
 * # Safety
 * `run` must be NULL or a handle from this library, not yet freed.
 */
void pfsim_run_free(struct PfsimRun *run);

/**
 * Number of events in a run; 0 for NULL.
 *
 * # Safety
 * `run` must be NULL or a live handle.
 */
size_t pfsim_run_event_count(const struct PfsimRun *run);

/**
 * Copies up to `capacity` events into `buffer`; writes the number copied
 * to `written`.
 *
 * # Safety
 * `run` must be a live handle; `buffer` must hold `capacity` events;
 * `written` must be writable.
 */
enum PfsimStatus pfsim_run_events(const struct PfsimRun *run,
                                  struct PfsimEvent *buffer,
                                  size_t capacity,
                                  size_t *written);

/**
 * Run summary as JSON (the `summary.json` document); free with
 * [`pfsim_string_free`].
 *
 * # Safety
 * `run` must be a live handle; `out` must be writable.
 */
enum PfsimStatus pfsim_run_summary_json(const struct PfsimRun *run, char **out);

/**
 * Chi-square verdict of a run: 1 pass, 0 fail, -1 unavailable.
 *
 * # Safety
 * `run` must be a live handle; `verdict` must be writable.
 */
enum PfsimStatus pfsim_run_verdict(const struct PfsimRun *run, int32_t *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PFSIM_H */
