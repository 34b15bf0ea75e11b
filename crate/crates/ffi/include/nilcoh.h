#ifndef NILCOH_H
#define NILCOH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NcStatus {
  NC_STATUS_OK = 0,
  NC_STATUS_NULL_POINTER = 1,
  NC_STATUS_INVALID_UTF8 = 2,
  NC_STATUS_INVALID_INPUT = 3,
  NC_STATUS_NOT_LIE_ALGEBRA = 4,
  NC_STATUS_COMPUTATION = 5,
  NC_STATUS_OUT_OF_RANGE = 6,
  NC_STATUS_PANIC = 7,
} NcStatus;

typedef enum NcTheory {
  NC_THEORY_DE_RHAM = 0,
  NC_THEORY_DOLBEAULT = 1,
  NC_THEORY_BOTT_CHERN = 2,
  NC_THEORY_AEPPLI = 3,
} NcTheory;

/**
 * A Lie algebra given by its structure constants.
 */
typedef struct NcAlgebra NcAlgebra;

/**
 * Cohomology dimensions in each total degree.
 */
typedef struct NcTable NcTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next call that fails.
 */
const char *nc_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void nc_string_free(char *s);

/**
 * Look up a catalog entry by name or alias.
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` writable.
 */
enum NcStatus nc_algebra_from_catalog(const char *name, struct NcAlgebra **out);

/**
 * Parse Salamon shorthand such as `(0,0,12)`.
 *
 * # Safety
 * `code` must be a nul-terminated string and `out` writable.
 */
enum NcStatus nc_algebra_from_salamon(const char *code, struct NcAlgebra **out);

/**
 * Parse the JSON structure-constant document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
enum NcStatus nc_algebra_from_json(const char *json, struct NcAlgebra **out);

/**
 * # Safety
 * `a` must come from an `nc_algebra_*` constructor and not be freed twice.
 */
void nc_algebra_free(struct NcAlgebra *a);

/**
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum NcStatus nc_algebra_dim(const struct NcAlgebra *a, size_t *out);

/**
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum NcStatus nc_algebra_is_unimodular(const struct NcAlgebra *a, bool *out);

/**
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum NcStatus nc_algebra_is_nilpotent(const struct NcAlgebra *a, bool *out);

/**
 * The structure constants as a JSON document; release with [`nc_string_free`].
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum NcStatus nc_algebra_to_json(const struct NcAlgebra *a, char **out);

/**
 * De Rham cohomology of the algebra.
 *
 * # Safety
 * `a` must be a live handle and `out` writable.
 */
enum NcStatus nc_betti(const struct NcAlgebra *a, struct NcTable **out);

/**
 * Cohomology of `d − θ∧` for a 1-form `theta` such as `-2*e3`.
 *
 * # Safety
 * `a` must be a live handle, `theta` a nul-terminated string and `out` writable.
 */
enum NcStatus nc_morse_novikov(const struct NcAlgebra *a, const char *theta, struct NcTable **out);

/**
 * Cohomology of a complex structure on `a` given as a JSON document: either
 * `{"J": [[…]], "chosen": […]}` or direct equations `{"m": …, "d": {…}}`.
 *
 * # Safety
 * `a` must be a live handle, `json` a nul-terminated string and `out` writable.
 */
enum NcStatus nc_complex_cohomology(const struct NcAlgebra *a,
                                    const char *json,
                                    enum NcTheory theory,
                                    struct NcTable **out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice.
 */
void nc_table_free(struct NcTable *t);

/**
 * Highest degree; degrees run from 0 to this value.
 *
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum NcStatus nc_table_top_degree(const struct NcTable *t, size_t *out);

/**
 * Total dimension in `degree`.
 *
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum NcStatus nc_table_dim(const struct NcTable *t, size_t degree, size_t *out);

/**
 * Dimension in bidegree `(p, q)`; only for Dolbeault, Bott-Chern and Aeppli tables.
 *
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum NcStatus nc_table_bidegree_dim(const struct NcTable *t, size_t p, size_t q, size_t *out);

/**
 * Poincaré polynomial such as `x^3 + 2*x^2 + 2*x + 1`; release with [`nc_string_free`].
 *
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum NcStatus nc_table_poincare(const struct NcTable *t, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILCOH_H */
