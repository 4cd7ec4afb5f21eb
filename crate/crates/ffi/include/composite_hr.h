#ifndef COMPOSITE_HR_H
#define COMPOSITE_HR_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stddef.h>
#include <stdint.h>

#define CHR_FAMILY_BB 0

#define CHR_FAMILY_UNIVERSAL 1

/**
 * Status codes. Validation and I/O match the CLI exit codes.
 */
typedef enum ChrStatus {
  CHR_STATUS_OK = 0,
  CHR_STATUS_NULL_POINTER = 1,
  CHR_STATUS_VALIDATION = 2,
  CHR_STATUS_IO = 3,
  CHR_STATUS_BUFFER_TOO_SMALL = 4,
  CHR_STATUS_PANIC = 5,
} ChrStatus;

/**
 * Opaque N-pod system handle.
 */
typedef struct ChrSystem ChrSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next `chr_*` call on the same thread.
 */
const char *chr_last_error(void);

/**
 * Creates a rectangular-pulse system from `n` couplings and coupling phases.
 *
 * # Safety
 * `couplings` and `phases` must point to `n` readable doubles; `out` must be
 * a valid pointer to a handle slot.
 */
enum ChrStatus chr_system_new(const double *couplings,
                              const double *phases,
                              size_t n,
                              double detuning,
                              struct ChrSystem **out);

/**
 * Creates a system from a JSON run configuration (the CLI `hr` format).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid handle slot.
 */
enum ChrStatus chr_system_from_json(const char *json, struct ChrSystem **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `sys` must come from a `chr_system_*` constructor and not be used afterwards.
 */
void chr_system_free(struct ChrSystem *sys);

/**
 * Manifold dimension N, or 0 for a NULL handle.
 *
 * # Safety
 * `sys` must be NULL or a live handle.
 */
size_t chr_system_dim(const struct ChrSystem *sys);

/**
 * Switches the shared envelope to a Gaussian truncated at `truncation`
 * 1/e half-widths (`truncation <= 0` selects rectangular pulses).
 *
 * # Safety
 * `sys` must be a live handle.
 */
enum ChrStatus chr_system_set_gaussian(struct ChrSystem *sys, double truncation);

/**
 * Writes the bright (Householder) vector `v` into `re`/`im` (length ≥ N).
 *
 * # Safety
 * `sys` must be a live handle; `re`, `im` must hold `len` doubles.
 */
enum ChrStatus chr_bright_vector(const struct ChrSystem *sys, double *re, double *im, size_t len);

/**
 * Writes the `n` phases (radians) of a composite family into `out`.
 *
 * # Safety
 * `out` must hold `len` doubles.
 */
enum ChrStatus chr_phase_list(uint32_t family, size_t n, uint32_t variant, double *out, size_t len);

/**
 * Writes `I + (e^{iφ} - 1) v v†` (row-major, N×N) for the `n`-component
 * vector `v_re + i v_im`, which must be normalized.
 *
 * # Safety
 * `v_re`, `v_im` must hold `n` doubles; `out_re`, `out_im` hold `len`.
 */
enum ChrStatus chr_householder_matrix(const double *v_re,
                                      const double *v_im,
                                      size_t n,
                                      double hr_phase,
                                      double *out_re,
                                      double *out_im,
                                      size_t len);

/**
 * Simulates the composite reflection with phase `hr_phase` on `sys` by
 * full propagation, writing the N×N manifold block and its infidelity
 * against the target reflection. `substeps` applies to shaped pulses.
 *
 * # Safety
 * `sys` must be a live handle; `out_re`, `out_im` must hold `len` doubles;
 * `infidelity_out` may be NULL.
 */
enum ChrStatus chr_composite_hr(const struct ChrSystem *sys,
                                uint32_t family,
                                size_t n,
                                uint32_t variant,
                                double hr_phase,
                                double area,
                                double detuning,
                                size_t substeps,
                                double *out_re,
                                double *out_im,
                                size_t len,
                                double *infidelity_out);

/**
 * `2|sin(φ/2)| cos^{2n}(A/2)`.
 */
double chr_bb_infidelity_analytic(double hr_phase, double area, size_t n);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMPOSITE_HR_H */
