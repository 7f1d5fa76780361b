/* C interface to the mindgraph opinion dynamics library. */

#ifndef MINDGRAPH_H
#define MINDGRAPH_H

/* Generated with cbindgen:0.27.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every API function.
 */
typedef enum MgStatus {
  MG_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  MG_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  MG_INVALID_UTF8 = 2,
  /**
   * Input text failed to parse or validate.
   */
  MG_PARSE_ERROR = 3,
  /**
   * The operation failed at run time (bad entity, domain, etc.).
   */
  MG_RUNTIME_ERROR = 4,
  /**
   * A panic was caught at the boundary; state may be inconsistent.
   */
  MG_INTERNAL_ERROR = 5,
} MgStatus;

/**
 * Opaque scenario handle.
 */
typedef struct MgScenario MgScenario;

/**
 * Opaque time-varying graph handle.
 */
typedef struct MgTvg MgTvg;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Never NULL;
 * empty before any failure. Valid until the next library call on the
 * same thread. Do not free.
 */
const char *mg_last_error(void);

/**
 * Frees a string previously returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library that has
 * not been freed yet.
 */
void mg_string_free(char *s);

/**
 * Parses the textual graph format into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum MgStatus mg_tvg_parse(const char *text, struct MgTvg **out);

/**
 * Releases a graph handle.
 *
 * # Safety
 * `tvg` must be NULL or an unfreed handle from [`mg_tvg_parse`].
 */
void mg_tvg_free(struct MgTvg *tvg);

/**
 * Serializes the graph back to its textual format.
 *
 * # Safety
 * `tvg` must be a valid handle; `out` a valid pointer. The returned
 * string must be released with [`mg_string_free`].
 */
enum MgStatus mg_tvg_to_text(const struct MgTvg *tvg, char **out);

/**
 * Number of entities in the graph.
 *
 * # Safety
 * `tvg` must be a valid handle; `out` a valid pointer.
 */
enum MgStatus mg_tvg_n_entities(const struct MgTvg *tvg, size_t *out);

/**
 * Lifetime of the graph as a half-open interval `[start, end)`.
 *
 * # Safety
 * `tvg` must be a valid handle; `start` and `end` valid pointers.
 */
enum MgStatus mg_tvg_lifetime(const struct MgTvg *tvg, uint64_t *start, uint64_t *end);

/**
 * Whether the edge `{u, v}` is present at time `t`.
 *
 * # Safety
 * `tvg` must be a valid handle; `out` a valid pointer.
 */
enum MgStatus mg_tvg_presence(const struct MgTvg *tvg, size_t u, size_t v, uint64_t t, bool *out);

/**
 * Earliest arrival time from `src` to `dst` departing at or after
 * `t_start`. Sets `*found` to false (and leaves `*arrival` untouched)
 * when no journey exists.
 *
 * # Safety
 * `tvg` must be a valid handle; `found` and `arrival` valid pointers.
 */
enum MgStatus mg_tvg_foremost_arrival(const struct MgTvg *tvg,
                                      size_t src,
                                      size_t dst,
                                      uint64_t t_start,
                                      bool *found,
                                      uint64_t *arrival);

/**
 * Parses scenario text into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` a valid pointer.
 */
enum MgStatus mg_scenario_parse(const char *text, struct MgScenario **out);

/**
 * Releases a scenario handle.
 *
 * # Safety
 * `scenario` must be NULL or an unfreed handle from [`mg_scenario_parse`].
 */
void mg_scenario_free(struct MgScenario *scenario);

/**
 * Overrides one scenario key with a new value, as `--set` does on the
 * command line.
 *
 * # Safety
 * `scenario` must be a valid handle; `key` and `value` NUL-terminated.
 */
enum MgStatus mg_scenario_set(struct MgScenario *scenario, const char *key, const char *value);

/**
 * Emits the scenario in its canonical textual form.
 *
 * # Safety
 * `scenario` must be a valid handle; `out` a valid pointer. The
 * returned string must be released with [`mg_string_free`].
 */
enum MgStatus mg_scenario_to_text(const struct MgScenario *scenario, char **out);

/**
 * Runs the scenario and returns the full trajectory as JSON. The
 * output carries no timestamp, so identical inputs give identical
 * bytes.
 *
 * # Safety
 * `scenario` must be a valid handle; `out` a valid pointer. The
 * returned string must be released with [`mg_string_free`].
 */
enum MgStatus mg_scenario_run_json(const struct MgScenario *scenario, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINDGRAPH_H */
