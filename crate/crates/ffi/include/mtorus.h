#ifndef MTORUS_H
#define MTORUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MtCommand {
  MT_COMMAND_ANALYZE = 0,
  MT_COMMAND_GROWTH = 1,
  MT_COMMAND_CERTIFY = 2,
  MT_COMMAND_DIVERGENCE = 3,
} MtCommand;

typedef enum MtFormat {
  MT_FORMAT_TEXT = 0,
  MT_FORMAT_STRUCTURED = 1,
} MtFormat;

typedef enum MtStatus {
  MT_STATUS_OK = 0,
  MT_STATUS_NULL_POINTER = 1,
  MT_STATUS_INVALID_UTF8 = 2,
  MT_STATUS_PARSE = 3,
  MT_STATUS_INVALID_ARGUMENT = 4,
  MT_STATUS_PANIC = 5,
} MtStatus;

/**
 * The outcome of one command.
 */
typedef struct MtReport MtReport;

/**
 * A parsed input file.
 */
typedef struct MtSpec MtSpec;

typedef struct MtOptions {
  uint32_t max_n;
  uint32_t radius_min;
  uint32_t radius_max;
  double horizon;
  uint32_t power;
  uint64_t ball_budget;
  uint64_t word_cap;
} MtOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Defaults, with budgets taken from the environment.
 */
struct MtOptions mt_options_default(void);

/**
 * Parses a NUL-terminated input file into `*out`.
 *
 * # Safety
 * `text` must be a valid C string and `out` a writable pointer.
 */
enum MtStatus mt_spec_parse(const char *text, struct MtSpec **out);

/**
 * # Safety
 * `spec` must come from [`mt_spec_parse`] and not be freed twice.
 */
void mt_spec_free(struct MtSpec *spec);

/**
 * Runs `command` on `spec`. `options` may be null for defaults. The
 * analysis outcome, including refusals, is read from the report.
 *
 * # Safety
 * `spec` must be a live handle, `options` null or valid, `out` writable.
 */
enum MtStatus mt_execute(const struct MtSpec *spec,
                         enum MtCommand command,
                         const struct MtOptions *options,
                         struct MtReport **out);

/**
 * # Safety
 * `report` must come from [`mt_execute`] and not be freed twice.
 */
void mt_report_free(struct MtReport *report);

/**
 * Process exit code for the report: 0 ok, 2 verification failure,
 * 3 refused, 4 budget exceeded. -1 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int32_t mt_report_exit_code(const struct MtReport *report);

/**
 * Certified thickness order, or -1 when there is no certificate.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
int32_t mt_report_order(const struct MtReport *report);

/**
 * Renders the report into a new string owned by the caller.
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum MtStatus mt_report_render(const struct MtReport *report, enum MtFormat format, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void mt_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *mt_last_error_message(void);

const char *mt_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MTORUS_H */
