#ifndef GROUNDC_H
#define GROUNDC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call results. The first five agree with the exit codes of `groundc`.
 */
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_SUITE_FAILED = 1,
  GC_STATUS_STATIC_ERROR = 2,
  GC_STATUS_RESOURCE_EXHAUSTED = 3,
  GC_STATUS_USAGE_ERROR = 4,
  GC_STATUS_NULL_ARGUMENT = 5,
  GC_STATUS_INVALID_UTF8 = 6,
  GC_STATUS_PANIC = 7,
} GcStatus;

/**
 * Loaded bases, languages and named terms, plus the last error.
 */
typedef struct GcSession GcSession;

/**
 * A term, tied to the language it was parsed in.
 */
typedef struct GcTerm GcTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * A session with the `gen` language over the empty base. Fuel defaults
 * from `GROUNDC_FUEL`.
 */
struct GcSession *gc_session_new(void);

/**
 * # Safety
 * `s` is null or a live session from [`gc_session_new`], not used afterwards.
 */
void gc_session_free(struct GcSession *s);

/**
 * The message of the last failed call on `s`, or null. Valid until the
 * next call on `s`.
 *
 * # Safety
 * `s` is null or a live session.
 */
const char *gc_last_error(const struct GcSession *s);

/**
 * # Safety
 * `p` is null or a string returned by this library.
 */
void gc_string_free(char *p);

/**
 * `ar`, `empty` or a `.base` path; builtin languages are rebuilt over it.
 *
 * # Safety
 * `s` is a live session, `base` a NUL-terminated string.
 */
enum GcStatus gc_session_set_base(struct GcSession *s, const char *base);

/**
 * `gen`, `core`, `ha` or a `.glang` path becomes the current language.
 *
 * # Safety
 * `s` is a live session, `lang` a NUL-terminated string.
 */
enum GcStatus gc_session_use_language(struct GcSession *s, const char *lang);

/**
 * # Safety
 * `s` is a live session.
 */
enum GcStatus gc_session_set_fuel(struct GcSession *s, uint64_t fuel);

/**
 * One REPL line (a subcommand, `:load` or `:let`). Its printed output,
 * error lines included, is stored in `*out`.
 *
 * # Safety
 * `s` is a live session, `line` a NUL-terminated string, `out` writable.
 */
enum GcStatus gc_run(struct GcSession *s, const char *line, char **out);

/**
 * Parses a term, a `.gterm` path or a named term in the current language.
 *
 * # Safety
 * `s` is a live session, `src` a NUL-terminated string, `out` writable.
 */
enum GcStatus gc_term_parse(struct GcSession *s, const char *src, struct GcTerm **out);

/**
 * # Safety
 * `t` is null or a live term, not used afterwards.
 */
void gc_term_free(struct GcTerm *t);

/**
 * The term in the text syntax, or null for a null handle.
 *
 * # Safety
 * `t` is null or a live term.
 */
char *gc_term_to_string(const struct GcTerm *t);

/**
 * The judgment `Γ ⊢ β` of a well-typed term.
 *
 * # Safety
 * `s` is a live session, `t` a live term, `out` writable.
 */
enum GcStatus gc_term_check(struct GcSession *s, const struct GcTerm *t, char **out);

/**
 * Normal form of a closed well-typed term, and the steps it took.
 * `steps` may be null.
 *
 * # Safety
 * `s` is a live session, `t` a live term, `out` writable, `steps` null or writable.
 */
enum GcStatus gc_term_normalize(struct GcSession *s,
                                const struct GcTerm *t,
                                struct GcTerm **out,
                                uint64_t *steps);

/**
 * Whether two terms with the same judgment are identical.
 *
 * # Safety
 * `s` is a live session, `a` and `b` live terms, `out` writable.
 */
enum GcStatus gc_identical(struct GcSession *s,
                           const struct GcTerm *a,
                           const struct GcTerm *b,
                           bool *out);

/**
 * Probes two terms for equivalence. `*out` receives the verdict text;
 * `*tested` (nullable) the number of instances when they are equivalent,
 * and 0 otherwise.
 *
 * # Safety
 * `s` is a live session, `a` and `b` live terms, `out` writable, `tested` null or writable.
 */
enum GcStatus gc_equivalent(struct GcSession *s,
                            const struct GcTerm *a,
                            const struct GcTerm *b,
                            char **out,
                            uint64_t *tested);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROUNDC_H */
