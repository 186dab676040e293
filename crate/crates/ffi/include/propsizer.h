#ifndef PROPSIZER_H
#define PROPSIZER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of every ABI function.
 */
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  /**
   * Null pointer or non UTF-8 string argument.
   */
  PS_STATUS_NULL_OR_INVALID_ARGUMENT = 1,
  /**
   * Malformed JSON, out-of-range values, unreadable catalog.
   */
  PS_STATUS_INVALID_INPUT = 2,
  /**
   * Valid input without a feasible design or operating state.
   */
  PS_STATUS_INFEASIBLE = 3,
  PS_STATUS_INTERNAL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  PS_STATUS_PANIC = 5,
} PsStatus;

/**
 * Opaque engine handle.
 */
typedef struct PsEngine PsEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an engine over the bundled sample catalog.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum PsStatus ps_engine_new_bundled(struct PsEngine **out);

/**
 * Creates an engine from a catalog directory and an optional models file
 * (pass null to fit models from the catalog).
 *
 * # Safety
 * `catalog_dir` must be a NUL-terminated string, `models_path` null or a
 * NUL-terminated string, `out` a valid pointer.
 */
enum PsStatus ps_engine_new(const char *catalog_dir,
                            const char *models_path,
                            struct PsEngine **out);

/**
 * Releases an engine. Null is ignored.
 *
 * # Safety
 * `engine` must come from one of the constructors and not be used afterwards.
 */
void ps_engine_free(struct PsEngine *engine);

/**
 * Runs the optimizer on a requirements JSON document. On success
 * `*out_json` holds the design; on failure it holds a structured error
 * document (kind, error, step, violations).
 *
 * # Safety
 * `engine` must be a live handle, `request_json` NUL-terminated, `out_json`
 * a valid pointer.
 */
enum PsStatus ps_optimize(const struct PsEngine *engine, const char *request_json, char **out_json);

/**
 * Evaluates a `{system, hover_thrust_n, thrust_ratio}` document.
 *
 * # Safety
 * Same contract as [`ps_optimize`].
 */
enum PsStatus ps_evaluate(const struct PsEngine *engine, const char *request_json, char **out_json);

/**
 * Content hash of the engine's catalog, owned by the caller.
 *
 * # Safety
 * `engine` must be a live handle and `out` a valid pointer.
 */
enum PsStatus ps_catalog_hash(const struct PsEngine *engine, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ps_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library on the same thread.
 */
const char *ps_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ps_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROPSIZER_H */
