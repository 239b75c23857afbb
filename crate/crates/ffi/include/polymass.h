#ifndef POLYMASS_H
#define POLYMASS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PmStatus {
  PM_STATUS_OK = 0,
  PM_STATUS_COUNTEREXAMPLE = 1,
  PM_STATUS_PARSE = 2,
  PM_STATUS_VALIDATION = 3,
  PM_STATUS_NULL_POINTER = 4,
  PM_STATUS_INVALID_UTF8 = 5,
  PM_STATUS_PANIC = 6,
} PmStatus;

/**
 * Opaque polytope handle.
 */
typedef struct PmPolytope PmPolytope;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Valid until the next call.
 */
const char *pm_last_error(void);

/**
 * Parses a polytope document.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_polytope_from_json(const char *json, struct PmPolytope **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `p` must come from `pm_polytope_from_json` and not be used afterwards.
 */
void pm_polytope_free(struct PmPolytope *p);

/**
 * Dimension of the ambient space, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
uintptr_t pm_polytope_dim(const struct PmPolytope *p);

/**
 * Number of facets, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
uintptr_t pm_polytope_nfacets(const struct PmPolytope *p);

/**
 * Full analysis report.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_analyze_json(const struct PmPolytope *p, char **out);

/**
 * Basis of mass linear functions with their coefficients.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_mass_linear_json(const struct PmPolytope *p, char **out);

/**
 * Lattice report of a smooth polytope.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_toric_json(const struct PmPolytope *p, char **out);

/**
 * Center of mass at the support numbers given as a JSON array of rationals
 * (`[[num, den], ...]` or plain integers).
 *
 * # Safety
 * `p` must be a live handle, `kappa_json` a NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_center_of_mass_json(const struct PmPolytope *p,
                                     const char *kappa_json,
                                     char **out);

/**
 * Runs a property suite on a corpus preset. `passed` receives 1 or 0.
 *
 * # Safety
 * `property` and `preset` must be NUL-terminated strings; `passed` and `out` valid pointers.
 */
enum PmStatus pm_verify_json(const char *property,
                             const char *preset,
                             uintptr_t count,
                             uint64_t seed,
                             int32_t *passed,
                             char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYMASS_H */
