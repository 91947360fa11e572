#ifndef CTRLSYNTH_H
#define CTRLSYNTH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_INVALID_UTF8 = 2,
  CS_STATUS_PARSE_ERROR = 3,
  CS_STATUS_VALIDATION_ERROR = 4,
  /**
   * The requested part of a synthesis result does not exist, e.g. the
   * controlled system of a failed synthesis.
   */
  CS_STATUS_NO_RESULT = 5,
  CS_STATUS_PANIC = 6,
} CsStatus;

/**
 * A parsed requirement formula.
 */
typedef struct CsFormula CsFormula;

/**
 * A parsed plant model.
 */
typedef struct CsModel CsModel;

/**
 * The outcome of a synthesis run.
 */
typedef struct CsSynthesis CsSynthesis;

/**
 * Statistics of one synthesis run.
 */
typedef struct CsStats {
  size_t iterations;
  size_t arcs_initial;
  size_t arcs_final;
  size_t nodes;
} CsStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a model in the text format. On success stores a new handle in
 * `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CsStatus cs_model_parse(const char *text, struct CsModel **out);

/**
 * Serializes a model back to the text format.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum CsStatus cs_model_to_text(const struct CsModel *model, char **out);

/**
 * # Safety
 * `model` must be null or a handle from [`cs_model_parse`] not yet freed.
 */
void cs_model_free(struct CsModel *model);

/**
 * Parses a requirement formula.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CsStatus cs_formula_parse(const char *text, struct CsFormula **out);

/**
 * # Safety
 * `formula` must be null or a handle from [`cs_formula_parse`] not yet
 * freed.
 */
void cs_formula_free(struct CsFormula *formula);

/**
 * Stores in `*holds` whether the initial state of `model` satisfies
 * `formula`.
 *
 * # Safety
 * Handles must be live and `holds` a valid pointer.
 */
enum CsStatus cs_check(const struct CsModel *model, const struct CsFormula *formula, bool *holds);

/**
 * Runs synthesis. A negative verdict is not an error: the call returns
 * `Ok` and [`cs_synthesis_succeeded`] reports the verdict.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum CsStatus cs_synthesize(const struct CsModel *model,
                            const struct CsFormula *formula,
                            struct CsSynthesis **out);

/**
 * True when the synthesis produced a controlled system. False for a null
 * handle.
 *
 * # Safety
 * `synthesis` must be null or a live handle.
 */
bool cs_synthesis_succeeded(const struct CsSynthesis *synthesis);

/**
 * # Safety
 * `synthesis` must be a live handle and `stats` a valid pointer.
 */
enum CsStatus cs_synthesis_stats(const struct CsSynthesis *synthesis, struct CsStats *stats);

/**
 * The controlled system in the model text format. Returns `NoResult` when
 * synthesis failed.
 *
 * # Safety
 * `synthesis` must be a live handle and `out` a valid pointer.
 */
enum CsStatus cs_synthesis_controlled_text(const struct CsSynthesis *synthesis, char **out);

/**
 * The failure witness as `state <name> obligation <formula>`. Returns
 * `NoResult` when synthesis succeeded.
 *
 * # Safety
 * `synthesis` must be a live handle and `out` a valid pointer.
 */
enum CsStatus cs_synthesis_witness_text(const struct CsSynthesis *synthesis, char **out);

/**
 * # Safety
 * `synthesis` must be null or a handle from [`cs_synthesize`] not yet
 * freed.
 */
void cs_synthesis_free(struct CsSynthesis *synthesis);

/**
 * Stores in `*related` whether `a` is simulated by `b`.
 *
 * # Safety
 * Handles must be live and `related` a valid pointer.
 */
enum CsStatus cs_simulates(const struct CsModel *a, const struct CsModel *b, bool *related);

/**
 * Stores in `*related` whether `a` is related to `b` by partial
 * bisimulation. Returns `ValidationError` when the models disagree on
 * which events are uncontrollable.
 *
 * # Safety
 * Handles must be live and `related` a valid pointer.
 */
enum CsStatus cs_partially_bisimilar(const struct CsModel *a,
                                     const struct CsModel *b,
                                     bool *related);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void cs_string_free(char *s);

/**
 * Description of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *cs_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CTRLSYNTH_H */
