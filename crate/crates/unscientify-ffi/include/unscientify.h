#ifndef UNSCIENTIFY_H
#define UNSCIENTIFY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every FFI entry point.
 */
typedef enum UnsStatus {
  /**
   * The call succeeded.
   */
  UnsOk = 0,
  /**
   * A required pointer argument was NULL.
   */
  UnsNullPointer = 1,
  /**
   * An input string was not valid UTF-8.
   */
  UnsInvalidUtf8 = 2,
  /**
   * Input content (CoNLL-U or JSON) failed to parse.
   */
  UnsParseError = 3,
  /**
   * The ruleset failed to parse, validate, or compile.
   */
  UnsRulesetError = 4,
  /**
   * An I/O error occurred.
   */
  UnsIoError = 5,
} UnsStatus;

/**
 * Opaque annotation engine: a compiled ruleset plus ingest configuration.
 */
typedef struct UnsEngine UnsEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message for this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes, excluding
 * the terminator. A zero return means no error has been recorded.
 *
 * # Safety
 * `buf` must point to at least `len` writable bytes, or be NULL (in which
 * case only the length is returned).
 */
uintptr_t uns_last_error(char *buf, uintptr_t len);

/**
 * Create an engine backed by the builtin ruleset.
 *
 * # Safety
 * `out` must be a valid pointer to an engine pointer slot.
 */
enum UnsStatus uns_engine_new_builtin(struct UnsEngine **out);

/**
 * Create an engine from rule file content (UTF-8 JSON).
 *
 * # Safety
 * `rules_json` must be a NUL-terminated string and `out` a valid slot.
 */
enum UnsStatus uns_engine_new_from_json(const char *rules_json, struct UnsEngine **out);

/**
 * Create an engine from a rule file on disk.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid slot.
 */
enum UnsStatus uns_engine_new_from_file(const char *path, struct UnsEngine **out);

/**
 * Release an engine created by one of the constructors. NULL is a no-op.
 *
 * # Safety
 * `engine` must be a pointer previously returned by an engine constructor
 * and not yet freed.
 */
void uns_engine_free(struct UnsEngine *engine);

/**
 * Ruleset version of an engine, as a newly allocated string.
 *
 * # Safety
 * `engine` must be a live engine pointer and `out` a valid slot. The
 * returned string must be freed with [`uns_string_free`].
 */
enum UnsStatus uns_engine_version(const struct UnsEngine *engine, char **out);

/**
 * Annotate plain UTF-8 text. On success `*out_json` holds a JSON array of
 * per-sentence records (same schema as the CLI's json output).
 *
 * # Safety
 * `engine` must be live, `text` NUL-terminated, `out_json` a valid slot.
 * The returned string must be freed with [`uns_string_free`].
 */
enum UnsStatus uns_annotate_text(const struct UnsEngine *engine, const char *text, char **out_json);

/**
 * Annotate CoNLL-U content (10-column, tab-separated).
 *
 * # Safety
 * Same contract as [`uns_annotate_text`].
 */
enum UnsStatus uns_annotate_conllu(const struct UnsEngine *engine,
                                   const char *conllu,
                                   char **out_json);

/**
 * Free a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library and not yet
 * freed.
 */
void uns_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNSCIENTIFY_H */
