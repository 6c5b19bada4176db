#ifndef BIPLAN_H
#define BIPLAN_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by all entry points.
 */
#define BIPLAN_OK 0

/**
 * Parse or geometry error.
 */
#define BIPLAN_ERR_PARSE 1

/**
 * Well-formed negative answer (infeasible instance, failed validation).
 */
#define BIPLAN_NEGATIVE 2

/**
 * Null pointer or invalid UTF-8 argument.
 */
#define BIPLAN_ERR_ARGUMENT 3

/**
 * Opaque plan: exact cost plus the decoupled move sequence.
 */
typedef struct BiplanPlan BiplanPlan;

/**
 * Opaque workspace instance: geometry, free space and the two terminals.
 */
typedef struct BiplanWorkspace BiplanWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a workspace instance from JSON (schema v1).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On success `*out` owns a workspace handle to be released with
 * [`biplan_workspace_free`].
 */
int biplan_workspace_parse_json(const char *json, BiplanWorkspace **out);

/**
 * Releases a workspace handle. Null is ignored.
 *
 * # Safety
 * `w` must have come from [`biplan_workspace_parse_json`] and not be freed
 * twice.
 */
void biplan_workspace_free(BiplanWorkspace *w);

/**
 * Number of vertices of the workspace polygon (diagnostic).
 *
 * # Safety
 * `w` must be a live workspace handle.
 */
int biplan_workspace_vertex_count(const BiplanWorkspace *w);

/**
 * Runs the exact min-sum planner between the instance's start and goal.
 * Returns `BIPLAN_OK` with a plan handle in `*out`, `BIPLAN_NEGATIVE` when
 * the instance is infeasible (no handle), or an error code.
 *
 * # Safety
 * `w` must be a live workspace handle; `out` must be valid. A returned plan
 * must be released with [`biplan_plan_free`].
 */
int biplan_plan_min_sum(const BiplanWorkspace *w, bool use_heuristic, BiplanPlan **out);

/**
 * Releases a plan handle. Null is ignored.
 *
 * # Safety
 * `p` must have come from [`biplan_plan_min_sum`] and not be freed twice.
 */
void biplan_plan_free(BiplanPlan *p);

/**
 * Exact plan cost as a `"p/q"` string; free with [`biplan_string_free`].
 *
 * # Safety
 * `p` must be a live plan handle.
 */
char *biplan_plan_cost_string(const BiplanPlan *p);

/**
 * Serializes the plan (including its timed form) to JSON; free the string
 * with [`biplan_string_free`].
 *
 * # Safety
 * `p` must be a live plan handle.
 */
char *biplan_plan_to_json(const BiplanPlan *p);

/**
 * Validates a plan JSON document against a workspace. Returns `BIPLAN_OK`
 * when valid, `BIPLAN_NEGATIVE` when violations were found (the report JSON
 * is stored in `*report_out` if non-null), or an error code.
 *
 * # Safety
 * `w` must be a live workspace handle, `plan_json` a valid NUL-terminated
 * string. A string stored in `*report_out` must be freed with
 * [`biplan_string_free`].
 */
int biplan_validate_plan_json(const BiplanWorkspace *w,
                              const char *plan_json,
                              bool timed,
                              char **report_out);

/**
 * Library version; free with [`biplan_string_free`].
 */
char *biplan_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have been returned by a biplan function and not freed before.
 */
void biplan_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BIPLAN_H */
