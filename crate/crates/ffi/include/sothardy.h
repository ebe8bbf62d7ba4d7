#ifndef SOTHARDY_H
#define SOTHARDY_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum SothardyStatus {
  SOTHARDY_STATUS_OK = 0,
  SOTHARDY_STATUS_NULL_POINTER = 1,
  SOTHARDY_STATUS_INVALID_UTF8 = 2,
  SOTHARDY_STATUS_BUFFER_TOO_SMALL = 3,
  SOTHARDY_STATUS_INVALID_ARGUMENT = 10,
  SOTHARDY_STATUS_INVALID_VALUE = 11,
  SOTHARDY_STATUS_DOMAIN = 12,
  SOTHARDY_STATUS_NOT_REPRESENTABLE = 13,
  SOTHARDY_STATUS_SHAPE_MISMATCH = 14,
  SOTHARDY_STATUS_PRECONDITION = 15,
  SOTHARDY_STATUS_CONVERGENCE_FAILURE = 16,
  SOTHARDY_STATUS_SCHEMA = 17,
  SOTHARDY_STATUS_VALIDATION = 18,
  SOTHARDY_STATUS_IO = 19,
  SOTHARDY_STATUS_PANIC = 99,
} SothardyStatus;

/**
 * A function on the unit circle.
 */
typedef struct SothardyCircle SothardyCircle;

/**
 * A function on the open unit disk.
 */
typedef struct SothardyDisk SothardyDisk;

/**
 * Options for [`sothardy_run`]. Zero selects the per-command default; so
 * does NaN for `tol`.
 */
typedef struct SothardyRunOptions {
  uint32_t grid;
  uint32_t ladder;
  /**
   * Norm exponent; `INFINITY` selects the sup norm.
   */
  double p;
  uint64_t seed;
  double tol;
  bool has_zeta;
  double zeta_re;
  double zeta_im;
  /**
   * Render the CSV table instead of JSON.
   */
  bool csv;
} SothardyRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next call into the library from the same thread.
 */
const char *sothardy_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *sothardy_version(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be freed twice.
 */
void sothardy_string_free(char *s);

/**
 * Builds a circle function from a spec document. Specs that describe a disk
 * function are rejected with `InvalidArgument`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SothardyStatus sothardy_circle_from_json(const char *json,
                                              uint64_t seed,
                                              struct SothardyCircle **out);

/**
 * Builds a disk function from a spec document. Circle specs are extended
 * to the disk by the strong Poisson integral.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SothardyStatus sothardy_disk_from_json(const char *json,
                                            uint64_t seed,
                                            struct SothardyDisk **out);

/**
 * Strong Poisson extension of a circle function.
 *
 * # Safety
 * `circle` must be a live handle and `out` a valid pointer.
 */
enum SothardyStatus sothardy_disk_from_circle(const struct SothardyCircle *circle,
                                              struct SothardyDisk **out);

/**
 * # Safety
 * `circle` must be null or a handle not yet freed.
 */
void sothardy_circle_free(struct SothardyCircle *circle);

/**
 * # Safety
 * `disk` must be null or a handle not yet freed.
 */
void sothardy_disk_free(struct SothardyDisk *disk);

/**
 * # Safety
 * `circle` must be a live handle; `rows` and `cols` valid pointers.
 */
enum SothardyStatus sothardy_circle_shape(const struct SothardyCircle *circle,
                                          size_t *rows,
                                          size_t *cols);

/**
 * # Safety
 * `disk` must be a live handle; `rows` and `cols` valid pointers.
 */
enum SothardyStatus sothardy_disk_shape(const struct SothardyDisk *disk,
                                        size_t *rows,
                                        size_t *cols);

/**
 * Value at the point `re + i im` of the unit circle.
 *
 * # Safety
 * `circle` must be a live handle and `out` must hold `len` doubles.
 */
enum SothardyStatus sothardy_circle_eval(const struct SothardyCircle *circle,
                                         double re,
                                         double im,
                                         double *out,
                                         size_t len);

/**
 * Value at the point `re + i im` of the open disk.
 *
 * # Safety
 * `disk` must be a live handle and `out` must hold `len` doubles.
 */
enum SothardyStatus sothardy_disk_eval(const struct SothardyDisk *disk,
                                       double re,
                                       double im,
                                       double *out,
                                       size_t len);

/**
 * Fourier coefficient of index `n` by trapezoidal quadrature on `grid_n` nodes.
 *
 * # Safety
 * `circle` must be a live handle and `out` must hold `len` doubles.
 */
enum SothardyStatus sothardy_circle_fourier_coefficient(const struct SothardyCircle *circle,
                                                        int64_t n,
                                                        size_t grid_n,
                                                        double *out,
                                                        size_t len);

/**
 * Strong Poisson integral at `re + i im` in the open disk.
 *
 * # Safety
 * `circle` must be a live handle and `out` must hold `len` doubles.
 */
enum SothardyStatus sothardy_circle_poisson(const struct SothardyCircle *circle,
                                            double re,
                                            double im,
                                            double *out,
                                            size_t len);

/**
 * `L^p_sot` norm on a grid of `grid_n` nodes; `p = INFINITY` gives the sup norm.
 *
 * # Safety
 * `circle` must be a live handle and `out` a valid pointer.
 */
enum SothardyStatus sothardy_circle_lp_sot_norm(const struct SothardyCircle *circle,
                                                double p,
                                                size_t grid_n,
                                                double *out);

/**
 * Strong `L^2` norm on a grid of `grid_n` nodes.
 *
 * # Safety
 * `circle` must be a live handle and `out` a valid pointer.
 */
enum SothardyStatus sothardy_circle_strong_l2_norm(const struct SothardyCircle *circle,
                                                   size_t grid_n,
                                                   double *out);

/**
 * `H^p` norm over the radii `1 - 2^-k`, `k = 1..=ladder_k`; writes the
 * supremum over the ladder.
 *
 * # Safety
 * `disk` must be a live handle and `out` a valid pointer.
 */
enum SothardyStatus sothardy_disk_hp_norm(const struct SothardyDisk *disk,
                                          double p,
                                          size_t ladder_k,
                                          size_t grid_n,
                                          double *out);

/**
 * Serializes a circle function as a spec document.
 *
 * # Safety
 * `circle` must be a live handle and `out` a valid pointer.
 */
enum SothardyStatus sothardy_circle_to_json(const struct SothardyCircle *circle, char **out);

/**
 * Serializes a disk function as a spec document.
 *
 * # Safety
 * `disk` must be a live handle and `out` a valid pointer.
 */
enum SothardyStatus sothardy_disk_to_json(const struct SothardyDisk *disk, char **out);

/**
 * Defaults: every resolution from the command, `p = 2`, seed 0.
 */
struct SothardyRunOptions sothardy_run_options_default(void);

/**
 * Runs a command-line command on an in-memory spec and returns the rendered
 * artifact. `claim` is required for `verify` and may be null otherwise.
 * `passed` is false when a verification or boundary extraction failed; the
 * status is still `Ok` in that case.
 *
 * # Safety
 * String arguments must be NUL-terminated or null where allowed; `options`
 * may be null for the defaults; `out` and `passed` must be valid pointers.
 */
enum SothardyStatus sothardy_run(const char *command,
                                 const char *spec_json,
                                 const char *claim,
                                 const struct SothardyRunOptions *options,
                                 char **out,
                                 bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOTHARDY_H */
