#ifndef PWSAMPLE_H
#define PWSAMPLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum PwsStatus {
  PWS_STATUS_OK = 0,
  PWS_STATUS_NULL_POINTER = 1,
  PWS_STATUS_INVALID_ARGUMENT = 2,
  PWS_STATUS_INVALID_SPECTRUM = 3,
  PWS_STATUS_PERIOD_MISMATCH = 4,
  PWS_STATUS_CERTIFICATE_FAILED = 5,
  PWS_STATUS_NUMERICAL_FAILURE = 6,
  PWS_STATUS_BUFFER_TOO_SMALL = 7,
  PWS_STATUS_PANIC = 8,
} PwsStatus;

// A constructed set with its certified bounds.
typedef struct PwsReport PwsReport;

// A grid spectrum `S = ∪_{r∈I} [2πr/m, 2π(r+1)/m]`.
typedef struct PwsSpectrum PwsSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *pws_last_error(void);

// Library version as a static string.
const char *pws_version(void);

// Creates a grid spectrum of order `m` from `len` cell residues.
//
// # Safety
// `cells` must point to `len` readable values; `out` must be writable.
enum PwsStatus pws_spectrum_new(size_t m,
                                const size_t *cells,
                                size_t len,
                                struct PwsSpectrum **out);

// Parses a JSON spectrum descriptor. Interval descriptors are covered by
// grid cells of order `m`; `m` is ignored for grid descriptors.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum PwsStatus pws_spectrum_from_json(const char *json, size_t m, struct PwsSpectrum **out);

// # Safety
// `spectrum` must be null or a handle from this library, freed once.
void pws_spectrum_free(struct PwsSpectrum *spectrum);

// Grid order `m` and cell count `n`.
//
// # Safety
// `spectrum` must be a live handle; `m` and `n` writable or null.
enum PwsStatus pws_spectrum_size(const struct PwsSpectrum *spectrum, size_t *m, size_t *n);

// Sampling set with `|J| ≤ ⌈(1+d)n⌉` and certified lower bound
// `≥ C(d)·n/m`.
//
// # Safety
// `spectrum` must be a live handle; `out` writable.
enum PwsStatus pws_build_sampling(const struct PwsSpectrum *spectrum,
                                  double d,
                                  struct PwsReport **out);

// Bessel set of `k` residues; `k = 0` selects the default `n + 1`.
//
// # Safety
// `spectrum` must be a live handle; `out` writable.
enum PwsStatus pws_build_bessel(const struct PwsSpectrum *spectrum,
                                size_t k,
                                struct PwsReport **out);

// Riesz set with `|J| ≥ ⌈(1−d)n⌉` and certified lower bound
// `≥ (1−√(1−d))²·n/m`, for `0 < d < 1`.
//
// # Safety
// `spectrum` must be a live handle; `out` writable.
enum PwsStatus pws_build_riesz(const struct PwsSpectrum *spectrum,
                               double d,
                               struct PwsReport **out);

// # Safety
// `report` must be null or a handle from this library, freed once.
void pws_report_free(struct PwsReport *report);

// Certified bounds and the overall pass flag (`1` or `0`).
//
// # Safety
// `report` must be a live handle; outputs writable or null.
enum PwsStatus pws_report_bounds(const struct PwsReport *report,
                                 double *lower,
                                 double *upper,
                                 int32_t *pass);

// Copies the residues `J` into `buf`. `len` always receives `|J|`; when
// `cap < |J|` nothing is copied and `BufferTooSmall` is returned.
//
// # Safety
// `report` must be a live handle; `buf` writable for `cap` values;
// `len` writable.
enum PwsStatus pws_report_residues(const struct PwsReport *report,
                                   size_t *buf,
                                   size_t cap,
                                   size_t *len);

// The full report as JSON; free with [`pws_string_free`].
//
// # Safety
// `report` must be a live handle; `out` writable.
enum PwsStatus pws_report_to_json(const struct PwsReport *report, char **out);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void pws_string_free(char *s);

// Exact bounds of `Λ = J + mℤ`. With `riesz = 0` these are the sampling
// bounds for `PW_S`; otherwise the Riesz bounds of `{e^{iγt}}_{γ∈Λ}` in
// `L²(S)`.
//
// # Safety
// `spectrum` must be a live handle; `residues` readable for `len`
// values; outputs writable or null.
enum PwsStatus pws_bounds(const struct PwsSpectrum *spectrum,
                          const size_t *residues,
                          size_t len,
                          int32_t riesz,
                          double *lower,
                          double *upper);

// Sampling bound `B` of `(S, J + mℤ)` and Riesz bound `A` of the
// complementary exponentials in `L²(T ∖ S)`. `A` is `+inf` when `J`
// contains every residue.
//
// # Safety
// As for [`pws_bounds`].
enum PwsStatus pws_duality(const struct PwsSpectrum *spectrum,
                           const size_t *residues,
                           size_t len,
                           double *b,
                           double *a);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PWSAMPLE_H */
