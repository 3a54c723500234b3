#ifndef PERMSYM_H
#define PERMSYM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; the first four match the CLI exit codes.
typedef enum PermsymStatus {
  PERMSYM_STATUS_OK = 0,
  // Invalid argument or a precondition violated by the input.
  PERMSYM_STATUS_USAGE = 1,
  // Numerical integrity, convergence or internal consistency failure.
  PERMSYM_STATUS_NUMERICAL = 2,
  // The missing-level comparison ran but did not verify.
  PERMSYM_STATUS_VERIFICATION_FAILED = 3,
  PERMSYM_STATUS_NULL_POINTER = 4,
  PERMSYM_STATUS_INDEX_OUT_OF_RANGE = 5,
  PERMSYM_STATUS_PANIC = 6,
} PermsymStatus;

// Character table of `S_N` with labels kept alive for C callers.
typedef struct PermsymCharacterTable PermsymCharacterTable;

typedef struct PermsymCiResult PermsymCiResult;

// Coupled oscillator model with `N` particles and coupling `ξ`.
typedef struct PermsymModel PermsymModel;

typedef struct PermsymReport PermsymReport;

// One CI eigenstate. Spins are stored doubled so they stay integral.
typedef struct PermsymCiState {
  double energy;
  double s_squared;
  int32_t twice_s;
  int32_t twice_ms;
  int32_t parity;
} PermsymCiState;

// Exact level that no CI state reached.
typedef struct PermsymMissingLevel {
  size_t n_sym;
  size_t n_last;
  double energy;
  // Nonzero when every irrep in the level is forbidden.
  int32_t forbidden_only;
} PermsymMissingLevel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty after success.
// Valid until the next call into this library on the same thread.
const char *permsym_last_error(void);

// Library version as a static NUL-terminated string.
const char *permsym_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed already.
void permsym_string_free(char *s);

// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum PermsymStatus permsym_model_new(size_t n, double xi, struct PermsymModel **out);

// # Safety
// `model` must be null or a handle from [`permsym_model_new`] not yet freed.
void permsym_model_free(struct PermsymModel *model);

// Force constants `k` and `k′` of the degenerate and symmetric modes.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_model_force_constants(const struct PermsymModel *model,
                                                 double *k,
                                                 double *k_prime);

// Exact energy of the level with `n_sym` degenerate-mode quanta and `n_last`
// symmetric-mode quanta.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_model_level_energy(const struct PermsymModel *model,
                                              size_t n_sym,
                                              size_t n_last,
                                              double *energy);

// # Safety
// `out` must be a valid pointer.
enum PermsymStatus permsym_table_new(size_t n, struct PermsymCharacterTable **out);

// # Safety
// `table` must be null or a live handle.
void permsym_table_free(struct PermsymCharacterTable *table);

// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_table_shape(const struct PermsymCharacterTable *table,
                                       size_t *irreps,
                                       size_t *classes);

// Character of irrep `irrep` on class `class`, both zero-based.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_table_character(const struct PermsymCharacterTable *table,
                                           size_t irrep,
                                           size_t class_,
                                           int64_t *value);

// Label and dimension of irrep `irrep`. The label lives as long as the table.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_table_irrep(const struct PermsymCharacterTable *table,
                                       size_t irrep,
                                       const char **label,
                                       size_t *dim);

// Point-group name and size of class `class`. The name lives as long as the
// table.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_table_class(const struct PermsymCharacterTable *table,
                                       size_t class_,
                                       const char **label,
                                       size_t *size);

// Total spins allowed with spatial irrep `label`, as `2S`, in decreasing
// order. Writes at most `capacity` values and always the full count; a
// count of zero means the irrep is forbidden.
//
// # Safety
// `label` must be a NUL-terminated string; `twice_spins` must hold
// `capacity` values (it may be null when `capacity` is zero).
enum PermsymStatus permsym_allowed_spins(size_t n,
                                         const char *label,
                                         int32_t *twice_spins,
                                         size_t capacity,
                                         size_t *count);

// Full CI in `orbitals` oscillator orbitals. When `has_ms` is nonzero only
// determinants with `2M_s = twice_ms` are included.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_ci_run(const struct PermsymModel *model,
                                  size_t orbitals,
                                  int32_t has_ms,
                                  int32_t twice_ms,
                                  struct PermsymCiResult **out);

// # Safety
// `result` must be null or a live handle.
void permsym_ci_free(struct PermsymCiResult *result);

// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_ci_len(const struct PermsymCiResult *result, size_t *len);

// State `index` in ascending energy.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_ci_state(const struct PermsymCiResult *result,
                                    size_t index,
                                    struct PermsymCiState *state);

// Runs CI and compares it with the exact spectrum up to `max_quanta`.
// Returns [`PermsymStatus::Ok`] whenever the comparison completes, whether or
// not it verified; query [`permsym_report_verified`] for the outcome.
//
// # Safety
// `out` must be a valid pointer.
enum PermsymStatus permsym_compare_run(size_t n,
                                       double xi,
                                       size_t orbitals,
                                       size_t max_quanta,
                                       double tol,
                                       struct PermsymReport **out);

// # Safety
// `report` must be null or a live handle.
void permsym_report_free(struct PermsymReport *report);

// [`PermsymStatus::Ok`] if the comparison verified, otherwise
// [`PermsymStatus::VerificationFailed`].
//
// # Safety
// `report` must be a live handle.
enum PermsymStatus permsym_report_verified(const struct PermsymReport *report);

// Counts of matched states, missing levels and spurious states, plus the
// convergence horizon.
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_report_counts(const struct PermsymReport *report,
                                         size_t *matched,
                                         size_t *missing,
                                         size_t *spurious,
                                         double *horizon);

// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_report_missing(const struct PermsymReport *report,
                                          size_t index,
                                          struct PermsymMissingLevel *level);

// The whole report as JSON. Release with [`permsym_string_free`].
//
// # Safety
// Pointers must be valid.
enum PermsymStatus permsym_report_json(const struct PermsymReport *report, char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERMSYM_H */
