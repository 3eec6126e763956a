#ifndef ESSENCE_H
#define ESSENCE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EssenceStatus {
  ESSENCE_STATUS_OK = 0,
  /**
   * The call worked and the check it ran did not pass.
   */
  ESSENCE_STATUS_CHECK_FAILED = 1,
  ESSENCE_STATUS_NULL_ARGUMENT = 2,
  ESSENCE_STATUS_INVALID_UTF8 = 3,
  ESSENCE_STATUS_PARSE_ERROR = 4,
  ESSENCE_STATUS_SCHEMA_ERROR = 5,
  ESSENCE_STATUS_UNSUPPORTED_VERSION = 6,
  /**
   * Rejected by domain validation; the last error code says why.
   */
  ESSENCE_STATUS_INVALID_ARGUMENT = 7,
  ESSENCE_STATUS_PANIC = 8,
} EssenceStatus;

/**
 * Opaque project handle.
 */
typedef struct EssenceProject EssenceProject;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, e.g. `"0.1.0"`. Static; do not free.
 */
const char *essence_version(void);

/**
 * Error code of the last failed call on this thread, or NULL. Valid until
 * the next call into this library on the same thread.
 */
const char *essence_last_error_code(void);

/**
 * Message of the last failed call on this thread, or NULL. Same lifetime
 * as [`essence_last_error_code`].
 */
const char *essence_last_error_message(void);

/**
 * # Safety
 * `s` is NULL or a string returned by this library and not yet freed.
 */
void essence_string_free(char *s);

/**
 * Creates an empty project on the built-in kernel.
 *
 * # Safety
 * `project_id` is a NUL-terminated string; `out` is writable.
 */
enum EssenceStatus essence_project_new(const char *project_id, struct EssenceProject **out);

/**
 * Parses and validates a project document of `len` bytes.
 *
 * # Safety
 * `bytes` points to `len` readable bytes; `out` is writable.
 */
enum EssenceStatus essence_project_load(const uint8_t *bytes,
                                        size_t len,
                                        struct EssenceProject **out);

/**
 * Serializes a project to its canonical document.
 *
 * # Safety
 * `project` is a live handle; `out` is writable.
 */
enum EssenceStatus essence_project_save(const struct EssenceProject *project, char **out);

/**
 * # Safety
 * `project` is NULL or a handle from this library not yet freed.
 */
void essence_project_free(struct EssenceProject *project);

/**
 * Adds an alpha instance of the named kernel alpha.
 *
 * # Safety
 * `project` is a live handle; strings are NUL-terminated.
 */
enum EssenceStatus essence_project_add_instance(struct EssenceProject *project,
                                                const char *id,
                                                const char *alpha,
                                                bool using_system);

/**
 * Appends a checkpoint record. The project is unchanged on failure.
 *
 * # Safety
 * `project` is a live handle; strings are NUL-terminated; `evidence` points
 * to `evidence_len` strings (may be NULL when `evidence_len` is 0).
 */
enum EssenceStatus essence_record_checkpoint(struct EssenceProject *project,
                                             const char *alpha_instance,
                                             const char *state,
                                             const char *checkpoint,
                                             bool satisfied,
                                             const char *const *evidence,
                                             size_t evidence_len,
                                             int64_t recorded_at);

/**
 * Computed state of an instance as JSON: `achieved`, `achieved-index`
 * (-1 for none), `next-state`, `blocking`. `achieved_index` may be NULL.
 *
 * # Safety
 * `project` is a live handle; `alpha_instance` is NUL-terminated; `out` is
 * writable.
 */
enum EssenceStatus essence_alpha_state(const struct EssenceProject *project,
                                       const char *alpha_instance,
                                       int64_t *achieved_index,
                                       char **out);

/**
 * Plain-text state card for one alpha instance.
 *
 * # Safety
 * `project` is a live handle; `alpha_instance` is NUL-terminated; `out` is
 * writable.
 */
enum EssenceStatus essence_render_card(const struct EssenceProject *project,
                                       const char *alpha_instance,
                                       char **out);

/**
 * Checks that the named views cover all three structure types. Returns
 * `ESSENCE_STATUS_CHECK_FAILED` when they do not; the JSON report is written
 * either way.
 *
 * # Safety
 * `project` is a live handle; `views` points to `views_len` strings; `out`
 * is writable.
 */
enum EssenceStatus essence_arch_check(const struct EssenceProject *project,
                                      const char *const *views,
                                      size_t views_len,
                                      char **out);

/**
 * Parses a multi-aspect designation and writes its canonical form.
 *
 * # Safety
 * `text_in` is NUL-terminated; `out` is writable.
 */
enum EssenceStatus essence_designation_canonicalize(const char *text_in, char **out);

/**
 * Parses a document designation against the built-in classification table
 * and writes `{"designation", "dcc", "area", "class"}` as JSON.
 *
 * # Safety
 * `text_in` is NUL-terminated; `out` is writable.
 */
enum EssenceStatus essence_document_parse(const char *text_in, char **out);

/**
 * The built-in kernel as a kernel document.
 *
 * # Safety
 * `out` is writable.
 */
enum EssenceStatus essence_builtin_kernel_json(char **out);

/**
 * Validates a kernel document. Writes `{"findings": [...]}` and returns
 * `ESSENCE_STATUS_CHECK_FAILED` when there are findings.
 *
 * # Safety
 * `kernel_json` is NUL-terminated; `out` is writable.
 */
enum EssenceStatus essence_kernel_validate(const char *kernel_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ESSENCE_H */
