//! C ABI for `fdasim`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` and
//! released by the matching `*_free`. Every fallible call returns an
//! `FdasimStatus`; on failure a description is available from
//! `fdasim_last_error_message` on the same thread. Panics are caught and
//! reported as `FDASIM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use fdasim::export::{export_csv, export_image, CsvScale};
use fdasim::{
    ArrayConfig, Complex64, Error, FieldPoint, GridSpec, PatternMode, PropagationEnv, PulseSpec,
    RasterGrid,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdasimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    LengthMismatch = 3,
    Incompatible = 4,
    NoFocus = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdasimPulseKind {
    Cw = 0,
    Rect = 1,
    Gaussian = 2,
}

/// Pulse description. `param_s` is the width for a rect and sigma for a
/// Gaussian; both fields are ignored for CW.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FdasimPulse {
    pub kind: FdasimPulseKind,
    pub center_s: f64,
    pub param_s: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdasimMode {
    /// Chosen from the array and pulse.
    Auto = 0,
    Cw = 1,
    FdaExact = 2,
    FdaApprox = 3,
    Pulsed = 4,
    EquivalentPa = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FdasimGrid {
    pub r_min_m: f64,
    pub r_max_m: f64,
    pub n_range: usize,
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub n_theta: usize,
    pub t_s: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FdasimFocus {
    pub peak_range_index: usize,
    pub peak_theta_index: usize,
    pub peak_r_m: f64,
    pub peak_theta_rad: f64,
    pub peak_mag: f64,
    pub range_extent_m: f64,
    pub range_center_m: f64,
    pub theta_extent_rad: f64,
    pub theta_center_rad: f64,
}

pub struct FdasimArray {
    inner: ArrayConfig,
}

pub struct FdasimEnv {
    inner: PropagationEnv,
}

pub struct FdasimRaster {
    inner: RasterGrid,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(FdasimStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::LengthMismatch { .. } => FdasimStatus::LengthMismatch,
            Error::Incompatible(_) | Error::UnboundedSupport => FdasimStatus::Incompatible,
            Error::NoFocus => FdasimStatus::NoFocus,
            Error::Io { .. } => FdasimStatus::Io,
            _ => FdasimStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(FdasimStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> FdasimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            FdasimStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {msg}"));
            FdasimStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

/// Optional input array: null means "use the default".
unsafe fn opt_slice<'a>(p: *const f64, n: usize) -> Option<&'a [f64]> {
    (!p.is_null()).then(|| std::slice::from_raw_parts(p, n))
}

unsafe fn out_slice<'a>(
    p: *mut f64,
    len: usize,
    needed: usize,
    what: &'static str,
) -> Result<&'a mut [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    if len < needed {
        return Err(Error::LengthMismatch {
            name: what,
            expected: needed,
            actual: len,
        }
        .into());
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a Path, Fail> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| {
        Fail(
            FdasimStatus::InvalidArgument,
            "path is not valid UTF-8".into(),
        )
    })?;
    Ok(Path::new(s))
}

fn pulse_spec(p: &FdasimPulse) -> Result<PulseSpec, Fail> {
    Ok(match p.kind {
        FdasimPulseKind::Cw => PulseSpec::Cw,
        FdasimPulseKind::Rect => PulseSpec::rect(p.center_s, p.param_s)?,
        FdasimPulseKind::Gaussian => PulseSpec::gaussian(p.center_s, p.param_s)?,
    })
}

fn write_complex(z: Complex64, re: *mut f64, im: *mut f64) -> Result<(), Fail> {
    unsafe {
        *out(re, "out_re")? = z.re;
        *out(im, "out_im")? = z.im;
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fdasim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the length needed including the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fdasim_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Creates an array. Null `weights` means all ones; null `phases_rad` or
/// `freq_offsets_hz` means all zeros. Non-null arrays hold `n` values.
///
/// # Safety
/// Pointer arguments must be null or valid for `n` reads; `out_array` must be
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fdasim_array_new(
    n: usize,
    spacing_m: f64,
    carrier_hz: f64,
    weights: *const f64,
    phases_rad: *const f64,
    freq_offsets_hz: *const f64,
    out_array: *mut *mut FdasimArray,
) -> FdasimStatus {
    guard(|| {
        let slot = out(out_array, "out_array")?;
        let w = opt_slice(weights, n).map_or_else(|| vec![1.0; n], <[f64]>::to_vec);
        let p = opt_slice(phases_rad, n).map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
        let f = opt_slice(freq_offsets_hz, n).map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
        let inner = ArrayConfig::new(n, spacing_m, carrier_hz, w, p, f)?;
        *slot = Box::into_raw(Box::new(FdasimArray { inner }));
        Ok(())
    })
}

/// Creates an FDA with linear offsets `n * base_offset_hz`.
///
/// # Safety
/// As for `fdasim_array_new`.
#[no_mangle]
pub unsafe extern "C" fn fdasim_array_new_fda_linear(
    n: usize,
    spacing_m: f64,
    carrier_hz: f64,
    weights: *const f64,
    base_offset_hz: f64,
    out_array: *mut *mut FdasimArray,
) -> FdasimStatus {
    guard(|| {
        let slot = out(out_array, "out_array")?;
        let w = opt_slice(weights, n).map_or_else(|| vec![1.0; n], <[f64]>::to_vec);
        let inner =
            fdasim::make_fda_linear(n, spacing_m, carrier_hz, base_offset_hz, w, vec![0.0; n])?;
        *slot = Box::into_raw(Box::new(FdasimArray { inner }));
        Ok(())
    })
}

/// # Safety
/// `array` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdasim_array_free(array: *mut FdasimArray) {
    if !array.is_null() {
        drop(Box::from_raw(array));
    }
}

/// # Safety
/// `array` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn fdasim_array_n_elements(array: *const FdasimArray) -> usize {
    array.as_ref().map_or(0, |a| a.inner.n_elements())
}

/// Creates a propagation environment. Null `tx_gains` means unity gains.
///
/// # Safety
/// `tx_gains` must be null or valid for `n_tx` reads; `out_env` valid for
/// one write.
#[no_mangle]
pub unsafe extern "C" fn fdasim_env_new(
    wave_speed: f64,
    rx_gain: f64,
    tx_gains: *const f64,
    n_tx: usize,
    out_env: *mut *mut FdasimEnv,
) -> FdasimStatus {
    guard(|| {
        let slot = out(out_env, "out_env")?;
        let tx = opt_slice(tx_gains, n_tx).map(<[f64]>::to_vec);
        let inner = PropagationEnv::new(wave_speed, rx_gain, tx)?;
        *slot = Box::into_raw(Box::new(FdasimEnv { inner }));
        Ok(())
    })
}

/// # Safety
/// `env` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdasim_env_free(env: *mut FdasimEnv) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Writes `n` Chebyshev taper weights into `out` (capacity `len`).
///
/// # Safety
/// `out_weights` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn fdasim_chebyshev_taper(
    n: usize,
    sidelobe_db: f64,
    out_weights: *mut f64,
    len: usize,
) -> FdasimStatus {
    guard(|| {
        let dst = out_slice(out_weights, len, n, "out_weights")?;
        dst.copy_from_slice(&fdasim::chebyshev_taper(n, sidelobe_db)?);
        Ok(())
    })
}

/// Writes `n` Chebyshev-shaped offsets in `[0, max_offset_hz]`.
///
/// # Safety
/// `out_offsets` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn fdasim_chebyshev_offsets(
    n: usize,
    max_offset_hz: f64,
    sidelobe_db: f64,
    out_offsets: *mut f64,
    len: usize,
) -> FdasimStatus {
    guard(|| {
        let dst = out_slice(out_offsets, len, n, "out_offsets")?;
        dst.copy_from_slice(&fdasim::chebyshev_offsets(n, max_offset_hz, sidelobe_db)?);
        Ok(())
    })
}

#[allow(clippy::too_many_arguments)]
unsafe fn af_common(
    array: *const FdasimArray,
    env: *const FdasimEnv,
    t_s: f64,
    r_m: f64,
    theta_rad: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    exact: bool,
) -> FdasimStatus {
    guard(|| {
        let a = &deref(array, "array")?.inner;
        let e = &deref(env, "env")?.inner;
        let p = FieldPoint::new(t_s, r_m, theta_rad)?;
        let z = if exact {
            fdasim::af_exact(a, e, &p)
        } else {
            fdasim::af_approx(a, e, &p)
        };
        write_complex(z, out_re, out_im)
    })
}

/// Exact array factor at `(t, r, theta)`.
///
/// # Safety
/// Handles must be live; `out_re`/`out_im` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn fdasim_af_exact(
    array: *const FdasimArray,
    env: *const FdasimEnv,
    t_s: f64,
    r_m: f64,
    theta_rad: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FdasimStatus {
    af_common(array, env, t_s, r_m, theta_rad, out_re, out_im, true)
}

/// Approximate array factor at `(t, r, theta)`.
///
/// # Safety
/// As for `fdasim_af_exact`.
#[no_mangle]
pub unsafe extern "C" fn fdasim_af_approx(
    array: *const FdasimArray,
    env: *const FdasimEnv,
    t_s: f64,
    r_m: f64,
    theta_rad: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FdasimStatus {
    af_common(array, env, t_s, r_m, theta_rad, out_re, out_im, false)
}

/// Pulse envelope times the array factor of a phased array.
///
/// # Safety
/// As for `fdasim_af_exact`; `pulse` valid for one read.
#[no_mangle]
pub unsafe extern "C" fn fdasim_pulsed_pattern(
    array: *const FdasimArray,
    env: *const FdasimEnv,
    pulse: *const FdasimPulse,
    t_s: f64,
    r_m: f64,
    theta_rad: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FdasimStatus {
    guard(|| {
        let a = &deref(array, "array")?.inner;
        let e = &deref(env, "env")?.inner;
        let pulse = pulse_spec(deref(pulse, "pulse")?)?;
        let p = FieldPoint::new(t_s, r_m, theta_rad)?;
        write_complex(fdasim::pulsed_pattern(a, e, &pulse, &p)?, out_re, out_im)
    })
}

/// Received signal including carrier and inverse-square amplitude.
///
/// # Safety
/// As for `fdasim_pulsed_pattern`.
#[no_mangle]
pub unsafe extern "C" fn fdasim_received_signal(
    array: *const FdasimArray,
    env: *const FdasimEnv,
    pulse: *const FdasimPulse,
    t_s: f64,
    r_m: f64,
    theta_rad: f64,
    exact_geometry: bool,
    out_re: *mut f64,
    out_im: *mut f64,
) -> FdasimStatus {
    guard(|| {
        let a = &deref(array, "array")?.inner;
        let e = &deref(env, "env")?.inner;
        let pulse = pulse_spec(deref(pulse, "pulse")?)?;
        let p = FieldPoint::new(t_s, r_m, theta_rad)?;
        write_complex(
            fdasim::received_signal(a, e, &pulse, &p, exact_geometry)?,
            out_re,
            out_im,
        )
    })
}

/// # Safety
/// `pulse` valid for one read, `out_value` for one write.
#[no_mangle]
pub unsafe extern "C" fn fdasim_envelope(
    pulse: *const FdasimPulse,
    t_s: f64,
    out_value: *mut f64,
) -> FdasimStatus {
    guard(|| {
        let pulse = pulse_spec(deref(pulse, "pulse")?)?;
        *out(out_value, "out_value")? = fdasim::envelope(&pulse, t_s);
        Ok(())
    })
}

/// Full width at half maximum in seconds; CW yields `FDASIM_STATUS_INCOMPATIBLE`.
///
/// # Safety
/// `pulse` valid for one read, `out_fwhm_s` for one write.
#[no_mangle]
pub unsafe extern "C" fn fdasim_fwhm(
    pulse: *const FdasimPulse,
    out_fwhm_s: *mut f64,
) -> FdasimStatus {
    guard(|| {
        let pulse = pulse_spec(deref(pulse, "pulse")?)?;
        *out(out_fwhm_s, "out_fwhm_s")? = fdasim::fwhm(&pulse)?;
        Ok(())
    })
}

/// Phases of the phased array matching `array` at `(t, r)`.
///
/// # Safety
/// Handles live; `out_phases` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn fdasim_equivalent_phases(
    array: *const FdasimArray,
    env: *const FdasimEnv,
    t_s: f64,
    r_m: f64,
    out_phases: *mut f64,
    len: usize,
) -> FdasimStatus {
    guard(|| {
        let a = &deref(array, "array")?.inner;
        let e = &deref(env, "env")?.inner;
        let dst = out_slice(out_phases, len, a.n_elements(), "out_phases")?;
        dst.copy_from_slice(&fdasim::equivalent_phases(a, e, t_s, r_m));
        Ok(())
    })
}

/// Evaluates a magnitude raster. `pulse` may be null for CW.
///
/// # Safety
/// Handles live; `grid` valid for one read; `out_raster` for one write.
#[no_mangle]
pub unsafe extern "C" fn fdasim_raster_evaluate(
    array: *const FdasimArray,
    env: *const FdasimEnv,
    pulse: *const FdasimPulse,
    mode: FdasimMode,
    grid: *const FdasimGrid,
    out_raster: *mut *mut FdasimRaster,
) -> FdasimStatus {
    guard(|| {
        let slot = out(out_raster, "out_raster")?;
        let a = &deref(array, "array")?.inner;
        let e = &deref(env, "env")?.inner;
        let pulse = match pulse.as_ref() {
            Some(p) => Some(pulse_spec(p)?),
            None => None,
        };
        let g = deref(grid, "grid")?;
        let spec = GridSpec {
            r_min_m: g.r_min_m,
            r_max_m: g.r_max_m,
            n_range: g.n_range,
            theta_min_rad: g.theta_min_rad,
            theta_max_rad: g.theta_max_rad,
            n_theta: g.n_theta,
            t_s: g.t_s,
        };
        let mode = match mode {
            FdasimMode::Auto => PatternMode::infer(a, pulse.as_ref()),
            FdasimMode::Cw => PatternMode::Cw,
            FdasimMode::FdaExact => PatternMode::FdaExact,
            FdasimMode::FdaApprox => PatternMode::FdaApprox,
            FdasimMode::Pulsed => PatternMode::Pulsed,
            FdasimMode::EquivalentPa => PatternMode::EquivalentPa,
        };
        let inner = fdasim::evaluate_raster(a, e, pulse.as_ref(), mode, &spec)?;
        *slot = Box::into_raw(Box::new(FdasimRaster { inner }));
        Ok(())
    })
}

/// # Safety
/// `raster` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdasim_raster_free(raster: *mut FdasimRaster) {
    if !raster.is_null() {
        drop(Box::from_raw(raster));
    }
}

/// # Safety
/// `raster` live; outputs valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn fdasim_raster_dims(
    raster: *const FdasimRaster,
    out_n_range: *mut usize,
    out_n_theta: *mut usize,
) -> FdasimStatus {
    guard(|| {
        let r = &deref(raster, "raster")?.inner;
        *out(out_n_range, "out_n_range")? = r.n_range();
        *out(out_n_theta, "out_n_theta")? = r.n_theta();
        Ok(())
    })
}

/// Copies the raster row-major (range outer, angle inner).
///
/// # Safety
/// `raster` live; `out_values` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn fdasim_raster_values(
    raster: *const FdasimRaster,
    out_values: *mut f64,
    len: usize,
) -> FdasimStatus {
    guard(|| {
        let r = &deref(raster, "raster")?.inner;
        let dst = out_slice(out_values, len, r.values().len(), "out_values")?;
        dst.copy_from_slice(r.values());
        Ok(())
    })
}

/// # Safety
/// `raster` live; `out_focus` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fdasim_find_focus(
    raster: *const FdasimRaster,
    out_focus: *mut FdasimFocus,
) -> FdasimStatus {
    guard(|| {
        let r = &deref(raster, "raster")?.inner;
        let dst = out(out_focus, "out_focus")?;
        let f = fdasim::find_focus(r)?;
        *dst = FdasimFocus {
            peak_range_index: f.peak_range_index,
            peak_theta_index: f.peak_theta_index,
            peak_r_m: f.peak_r_m,
            peak_theta_rad: f.peak_theta_rad,
            peak_mag: f.peak_mag,
            range_extent_m: f.range_extent_m,
            range_center_m: f.range_center_m,
            theta_extent_rad: f.theta_extent_rad,
            theta_center_rad: f.theta_center_rad,
        };
        Ok(())
    })
}

/// Writes the raster as CSV; values in dB clamped at `db_floor` when
/// `in_db` is set, linear otherwise.
///
/// # Safety
/// `raster` live; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn fdasim_raster_write_csv(
    raster: *const FdasimRaster,
    path: *const c_char,
    in_db: bool,
    db_floor: f64,
) -> FdasimStatus {
    guard(|| {
        let r = &deref(raster, "raster")?.inner;
        let scale = if in_db {
            CsvScale::Db { floor_db: db_floor }
        } else {
            CsvScale::Linear
        };
        export_csv(r, scale, path_arg(path)?)?;
        Ok(())
    })
}

/// Writes the raster as an 8-bit binary PGM in dB down to `db_floor`.
///
/// # Safety
/// As for `fdasim_raster_write_csv`.
#[no_mangle]
pub unsafe extern "C" fn fdasim_raster_write_pgm(
    raster: *const FdasimRaster,
    path: *const c_char,
    db_floor: f64,
) -> FdasimStatus {
    guard(|| {
        let r = &deref(raster, "raster")?.inner;
        export_image(r, db_floor, path_arg(path)?)?;
        Ok(())
    })
}
