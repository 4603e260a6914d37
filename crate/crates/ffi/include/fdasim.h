#ifndef FDASIM_H
#define FDASIM_H

/* Generated by cbindgen; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum FdasimStatus {
  FDASIM_STATUS_OK = 0,
  FDASIM_STATUS_NULL_POINTER = 1,
  FDASIM_STATUS_INVALID_ARGUMENT = 2,
  FDASIM_STATUS_LENGTH_MISMATCH = 3,
  FDASIM_STATUS_INCOMPATIBLE = 4,
  FDASIM_STATUS_NO_FOCUS = 5,
  FDASIM_STATUS_IO = 6,
  FDASIM_STATUS_PANIC = 7,
} FdasimStatus;

typedef enum FdasimPulseKind {
  FDASIM_PULSE_KIND_CW = 0,
  FDASIM_PULSE_KIND_RECT = 1,
  FDASIM_PULSE_KIND_GAUSSIAN = 2,
} FdasimPulseKind;

typedef enum FdasimMode {
  // Chosen from the array and pulse.
  FDASIM_MODE_AUTO = 0,
  FDASIM_MODE_CW = 1,
  FDASIM_MODE_FDA_EXACT = 2,
  FDASIM_MODE_FDA_APPROX = 3,
  FDASIM_MODE_PULSED = 4,
  FDASIM_MODE_EQUIVALENT_PA = 5,
} FdasimMode;

typedef struct FdasimArray FdasimArray;

typedef struct FdasimEnv FdasimEnv;

typedef struct FdasimRaster FdasimRaster;

// Pulse description. `param_s` is the width for a rect and sigma for a
// Gaussian; both fields are ignored for CW.
typedef struct FdasimPulse {
  enum FdasimPulseKind kind;
  double center_s;
  double param_s;
} FdasimPulse;

typedef struct FdasimGrid {
  double r_min_m;
  double r_max_m;
  size_t n_range;
  double theta_min_rad;
  double theta_max_rad;
  size_t n_theta;
  double t_s;
} FdasimGrid;

typedef struct FdasimFocus {
  size_t peak_range_index;
  size_t peak_theta_index;
  double peak_r_m;
  double peak_theta_rad;
  double peak_mag;
  double range_extent_m;
  double range_center_m;
  double theta_extent_rad;
  double theta_center_rad;
} FdasimFocus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *fdasim_version(void);

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the length needed including the NUL.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t fdasim_last_error_message(char *buf, size_t len);

// Creates an array. Null `weights` means all ones; null `phases_rad` or
// `freq_offsets_hz` means all zeros. Non-null arrays hold `n` values.
//
// # Safety
// Pointer arguments must be null or valid for `n` reads; `out_array` must be
// valid for one write.
enum FdasimStatus fdasim_array_new(size_t n,
                                   double spacing_m,
                                   double carrier_hz,
                                   const double *weights,
                                   const double *phases_rad,
                                   const double *freq_offsets_hz,
                                   struct FdasimArray **out_array);

// Creates an FDA with linear offsets `n * base_offset_hz`.
//
// # Safety
// As for `fdasim_array_new`.
enum FdasimStatus fdasim_array_new_fda_linear(size_t n,
                                              double spacing_m,
                                              double carrier_hz,
                                              const double *weights,
                                              double base_offset_hz,
                                              struct FdasimArray **out_array);

// # Safety
// `array` must be null or a handle from this library not yet freed.
void fdasim_array_free(struct FdasimArray *array);

// # Safety
// `array` must be a live handle or null (returns 0).
size_t fdasim_array_n_elements(const struct FdasimArray *array);

// Creates a propagation environment. Null `tx_gains` means unity gains.
//
// # Safety
// `tx_gains` must be null or valid for `n_tx` reads; `out_env` valid for
// one write.
enum FdasimStatus fdasim_env_new(double wave_speed,
                                 double rx_gain,
                                 const double *tx_gains,
                                 size_t n_tx,
                                 struct FdasimEnv **out_env);

// # Safety
// `env` must be null or a handle from this library not yet freed.
void fdasim_env_free(struct FdasimEnv *env);

// Writes `n` Chebyshev taper weights into `out` (capacity `len`).
//
// # Safety
// `out_weights` must be valid for `len` writes.
enum FdasimStatus fdasim_chebyshev_taper(size_t n,
                                         double sidelobe_db,
                                         double *out_weights,
                                         size_t len);

// Writes `n` Chebyshev-shaped offsets in `[0, max_offset_hz]`.
//
// # Safety
// `out_offsets` must be valid for `len` writes.
enum FdasimStatus fdasim_chebyshev_offsets(size_t n,
                                           double max_offset_hz,
                                           double sidelobe_db,
                                           double *out_offsets,
                                           size_t len);

// Exact array factor at `(t, r, theta)`.
//
// # Safety
// Handles must be live; `out_re`/`out_im` valid for one write each.
enum FdasimStatus fdasim_af_exact(const struct FdasimArray *array,
                                  const struct FdasimEnv *env,
                                  double t_s,
                                  double r_m,
                                  double theta_rad,
                                  double *out_re,
                                  double *out_im);

// Approximate array factor at `(t, r, theta)`.
//
// # Safety
// As for `fdasim_af_exact`.
enum FdasimStatus fdasim_af_approx(const struct FdasimArray *array,
                                   const struct FdasimEnv *env,
                                   double t_s,
                                   double r_m,
                                   double theta_rad,
                                   double *out_re,
                                   double *out_im);

// Pulse envelope times the array factor of a phased array.
//
// # Safety
// As for `fdasim_af_exact`; `pulse` valid for one read.
enum FdasimStatus fdasim_pulsed_pattern(const struct FdasimArray *array,
                                        const struct FdasimEnv *env,
                                        const struct FdasimPulse *pulse,
                                        double t_s,
                                        double r_m,
                                        double theta_rad,
                                        double *out_re,
                                        double *out_im);

// Received signal including carrier and inverse-square amplitude.
//
// # Safety
// As for `fdasim_pulsed_pattern`.
enum FdasimStatus fdasim_received_signal(const struct FdasimArray *array,
                                         const struct FdasimEnv *env,
                                         const struct FdasimPulse *pulse,
                                         double t_s,
                                         double r_m,
                                         double theta_rad,
                                         bool exact_geometry,
                                         double *out_re,
                                         double *out_im);

// # Safety
// `pulse` valid for one read, `out_value` for one write.
enum FdasimStatus fdasim_envelope(const struct FdasimPulse *pulse, double t_s, double *out_value);

// Full width at half maximum in seconds; CW yields `FDASIM_STATUS_INCOMPATIBLE`.
//
// # Safety
// `pulse` valid for one read, `out_fwhm_s` for one write.
enum FdasimStatus fdasim_fwhm(const struct FdasimPulse *pulse, double *out_fwhm_s);

// Phases of the phased array matching `array` at `(t, r)`.
//
// # Safety
// Handles live; `out_phases` valid for `len` writes.
enum FdasimStatus fdasim_equivalent_phases(const struct FdasimArray *array,
                                           const struct FdasimEnv *env,
                                           double t_s,
                                           double r_m,
                                           double *out_phases,
                                           size_t len);

// Evaluates a magnitude raster. `pulse` may be null for CW.
//
// # Safety
// Handles live; `grid` valid for one read; `out_raster` for one write.
enum FdasimStatus fdasim_raster_evaluate(const struct FdasimArray *array,
                                         const struct FdasimEnv *env,
                                         const struct FdasimPulse *pulse,
                                         enum FdasimMode mode,
                                         const struct FdasimGrid *grid,
                                         struct FdasimRaster **out_raster);

// # Safety
// `raster` must be null or a handle from this library not yet freed.
void fdasim_raster_free(struct FdasimRaster *raster);

// # Safety
// `raster` live; outputs valid for one write each.
enum FdasimStatus fdasim_raster_dims(const struct FdasimRaster *raster,
                                     size_t *out_n_range,
                                     size_t *out_n_theta);

// Copies the raster row-major (range outer, angle inner).
//
// # Safety
// `raster` live; `out_values` valid for `len` writes.
enum FdasimStatus fdasim_raster_values(const struct FdasimRaster *raster,
                                       double *out_values,
                                       size_t len);

// # Safety
// `raster` live; `out_focus` valid for one write.
enum FdasimStatus fdasim_find_focus(const struct FdasimRaster *raster,
                                    struct FdasimFocus *out_focus);

// Writes the raster as CSV; values in dB clamped at `db_floor` when
// `in_db` is set, linear otherwise.
//
// # Safety
// `raster` live; `path` a NUL-terminated UTF-8 string.
enum FdasimStatus fdasim_raster_write_csv(const struct FdasimRaster *raster,
                                          const char *path,
                                          bool in_db,
                                          double db_floor);

// Writes the raster as an 8-bit binary PGM in dB down to `db_floor`.
//
// # Safety
// As for `fdasim_raster_write_csv`.
enum FdasimStatus fdasim_raster_write_pgm(const struct FdasimRaster *raster,
                                          const char *path,
                                          double db_floor);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDASIM_H */
