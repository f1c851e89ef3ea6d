#ifndef ASVNAV_H
#define ASVNAV_H

/* Generated by cbindgen from crates/asvnav-ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AsvStatus {
  ASV_STATUS_OK = 0,
  ASV_STATUS_NULL_POINTER = 1,
  ASV_STATUS_INVALID_UTF8 = 2,
  ASV_STATUS_PARSE = 3,
  ASV_STATUS_CONFIG = 4,
  ASV_STATUS_IO = 5,
  ASV_STATUS_SIMULATION = 6,
  ASV_STATUS_OUT_OF_RANGE = 7,
  ASV_STATUS_PANIC = 8,
} AsvStatus;

/**
 * Effect model.
 */
typedef struct AsvModel AsvModel;

/**
 * Finished simulation run.
 */
typedef struct AsvRun AsvRun;

/**
 * Parsed scenario.
 */
typedef struct AsvScenario AsvScenario;

typedef struct AsvRunSummary {
  double max_error;
  double pct_over_1m;
  uint32_t sign_changes;
  size_t scored_samples;
  size_t log_records;
  /**
   * 1 when the mission completed.
   */
  int32_t complete;
} AsvRunSummary;

typedef struct AsvTrackPoint {
  double t;
  double lat;
  double lon;
  double spd_t;
  double h_t;
  uint32_t wp_index;
} AsvTrackPoint;

typedef struct AsvForceSample {
  double spd_c;
  double dir_c;
  double spd_w;
  double dir_w;
} AsvForceSample;

typedef struct AsvEffect {
  /**
   * Along-track ground-speed deficit, m/s; positive slows progress.
   */
  double effect_spd;
  /**
   * Drift bearing, degrees; east and north drift components follow.
   */
  double effect_dir;
  double effect_x;
  double effect_y;
} AsvEffect;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, static storage.
 */
const char *asv_version(void);

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next asvnav call on the same thread.
 */
const char *asv_last_error(void);

/**
 * Parse a scenario from JSON text. Relative paths resolve against the
 * working directory.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum AsvStatus asv_scenario_from_json(const char *json, struct AsvScenario **out);

/**
 * Load a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum AsvStatus asv_scenario_load(const char *path, struct AsvScenario **out);

/**
 * # Safety
 * `sc` must be a live scenario handle.
 */
enum AsvStatus asv_scenario_set_seed(struct AsvScenario *sc, uint64_t seed);

/**
 * # Safety
 * `sc` must be null or a handle from this library, freed once.
 */
void asv_scenario_free(struct AsvScenario *sc);

/**
 * Simulate a scenario to completion or its duration limit.
 *
 * # Safety
 * `sc` must be a live scenario handle; `out` must be writable.
 */
enum AsvStatus asv_run(const struct AsvScenario *sc, struct AsvRun **out);

/**
 * # Safety
 * `run` must be null or a handle from this library, freed once.
 */
void asv_run_free(struct AsvRun *run);

/**
 * Scores for a run. Runs with no scored samples report NaN errors.
 *
 * # Safety
 * `run` must be a live run handle; `out` must be writable.
 */
enum AsvStatus asv_run_summary(const struct AsvRun *run, struct AsvRunSummary *out);

/**
 * One logged trajectory record.
 *
 * # Safety
 * `run` must be a live run handle; `out` must be writable.
 */
enum AsvStatus asv_run_track_point(const struct AsvRun *run,
                                   size_t index,
                                   struct AsvTrackPoint *out);

/**
 * Write the run's mission, log, error series and reports into `dir`.
 *
 * # Safety
 * Handles must be live; `dir` must be a NUL-terminated string.
 */
enum AsvStatus asv_run_write(const struct AsvRun *run,
                             const struct AsvScenario *sc,
                             const char *dir);

/**
 * Ground-truth model: current plus `wind_drag_factor` times wind.
 *
 * # Safety
 * `out` must be writable.
 */
enum AsvStatus asv_model_oracle(double wind_drag_factor, struct AsvModel **out);

/**
 * Load a fitted model file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum AsvStatus asv_model_load(const char *path, struct AsvModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library, freed once.
 */
void asv_model_free(struct AsvModel *model);

/**
 * Predict the disturbance effect for a vehicle travelling along `heading`.
 *
 * # Safety
 * Pointers must be valid; `out` must be writable.
 */
enum AsvStatus asv_model_predict(const struct AsvModel *model,
                                 const struct AsvForceSample *force,
                                 double spd_target,
                                 double spd_t,
                                 double heading,
                                 struct AsvEffect *out);

/**
 * Equirectangular range (m) and bearing (deg) between two points.
 *
 * # Safety
 * `range` and `bearing` must be writable.
 */
enum AsvStatus asv_distance_bearing(double lat1,
                                    double lon1,
                                    double lat2,
                                    double lon2,
                                    double *range,
                                    double *bearing);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ASVNAV_H */
