#ifndef DDL_H
#define DDL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define DDL_OK 0

#define DDL_ERR_NULL -1

#define DDL_ERR_UTF8 -2

#define DDL_ERR_PARSE -3

#define DDL_ERR_MODEL -4

#define DDL_ERR_EVAL -5

#define DDL_ERR_RANGE -6

#define DDL_ERR_PANIC -7

#define DDL_RULE_OPT 0

#define DDL_RULE_MAX 1

#define DDL_RULE_LEWIS 2

#define DDL_PROP_REFLEXIVE 0

#define DDL_PROP_TOTAL 1

#define DDL_PROP_TRANSITIVE 2

#define DDL_PROP_QUASI_TRANSITIVE 3

#define DDL_PROP_ACYCLIC 4

#define DDL_PROP_SUZUMURA 5

#define DDL_PROP_FERRERS 6

#define DDL_PROP_INTERVAL_ORDER 7

#define DDL_PROP_OPT_LIMITED 8

#define DDL_PROP_MAX_LIMITED 9

#define DDL_PROP_OPT_SMOOTH 10

#define DDL_PROP_MAX_SMOOTH 11

// Opaque parsed formula.
typedef struct DdlFormula DdlFormula;

// Opaque preference model.
typedef struct DdlModel DdlModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after success.
// The pointer stays valid until the next call into the library.
const char *ddl_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void ddl_string_free(char *s);

// Parses a formula.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
int32_t ddl_formula_parse(const char *text, struct DdlFormula **out);

// Canonical text of a formula; free with `ddl_string_free`.
//
// # Safety
// `formula` must be a live handle; `out` must be writable.
int32_t ddl_formula_render(const struct DdlFormula *formula, char **out);

// # Safety
// `formula` must be null or a live handle; it is invalid afterwards.
void ddl_formula_free(struct DdlFormula *formula);

// Parses a model file's text.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
int32_t ddl_model_parse(const char *text, struct DdlModel **out);

// Model file text; free with `ddl_string_free`.
//
// # Safety
// `model` must be a live handle; `out` must be writable.
int32_t ddl_model_serialize(const struct DdlModel *model, char **out);

// # Safety
// `model` must be a live handle; `out` must be writable.
int32_t ddl_model_world_count(const struct DdlModel *model, uint32_t *out);

// # Safety
// `model` must be null or a live handle; it is invalid afterwards.
void ddl_model_free(struct DdlModel *model);

// Worlds where the formula is true, as a bitmask (bit i = world i).
// Atoms without a valuation denote the empty set.
//
// # Safety
// Handles must be live; `out` must be writable.
int32_t ddl_truth_set(const struct DdlFormula *formula,
                      const struct DdlModel *model,
                      uint32_t rule_code,
                      uint16_t *out);

// Whether a metavariable-free formula is true at every world.
//
// # Safety
// Handles must be live; `out` must be writable.
int32_t ddl_valid_in_model(const struct DdlFormula *formula,
                           const struct DdlModel *model,
                           uint32_t rule_code,
                           bool *out);

// Whether a schema (metavariables only) is valid on the model's frame;
// the valuation is ignored.
//
// # Safety
// Handles must be live; `out` must be writable.
int32_t ddl_valid_on_frame(const struct DdlFormula *schema,
                           const struct DdlModel *model,
                           uint32_t rule_code,
                           bool *out);

// Whether the model's betterness relation has a property (`DDL_PROP_*`).
//
// # Safety
// `model` must be a live handle; `out` must be writable.
int32_t ddl_check_property(const struct DdlModel *model, uint32_t property, bool *out);

// JSON report of the mere addition grid up to `max_n` worlds (1..=5, or
// up to 7 with isomorph rejection); free with `ddl_string_free`.
//
// # Safety
// `out` must be writable.
int32_t ddl_paradox_grid_json(uint32_t max_n, bool iso_reject, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DDL_H */
