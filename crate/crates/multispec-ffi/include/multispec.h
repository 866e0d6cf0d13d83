/* C interface to the multispec library. */

#ifndef MULTISPEC_H
#define MULTISPEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Return codes of [`ms_run`].
 */
#define MS_OK 0

#define MS_CHECKS_FAILED 1

#define MS_USAGE_ERROR 2

#define MS_PANIC 3

#define MS_BAD_INPUT 4

/**
 * Opaque session handle.
 */
typedef struct MsSession MsSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session with the default configuration. Never returns null.
 */
struct MsSession *ms_session_new(void);

/**
 * Creates a session from a JSON configuration document (same schema as the
 * CLI `--config` file). Returns null when the document does not parse.
 *
 * # Safety
 * `config_json` must be a valid NUL-terminated UTF-8 string or null.
 */
struct MsSession *ms_session_new_with_config(const char *config_json);

/**
 * Releases a session created by `ms_session_new*`.
 *
 * # Safety
 * `session` must be a pointer previously returned by this library, or null.
 */
void ms_session_free(struct MsSession *session);

/**
 * Runs one subcommand. `argv_json` is a JSON array of argument strings,
 * e.g. `["dims", "--d", "2", "--n", "2"]`. On return codes 0 and 1,
 * `*out_json` holds the JSON report; on other codes it is null and
 * [`ms_last_error`] describes the problem.
 *
 * # Safety
 * `session` must be a live session pointer; `argv_json` a valid
 * NUL-terminated string; `out_json` either null or a valid out-pointer.
 */
int32_t ms_run(struct MsSession *session, const char *argv_json, char **out_json);

/**
 * Message for the most recent failure on this session, or null.
 *
 * # Safety
 * `session` must be a live session pointer or null. The returned pointer
 * is invalidated by the next `ms_run` on the same session.
 */
const char *ms_last_error(const struct MsSession *session);

/**
 * Releases a string returned through `out_json`.
 *
 * # Safety
 * `s` must come from this library, or be null.
 */
void ms_string_free(char *s);

/**
 * Library version as a static string; do not free.
 */
const char *ms_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTISPEC_H */
