use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fdasim_ffi::*;

const C: f64 = 3.0e8;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe { fdasim_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

struct Handles {
    array: *mut FdasimArray,
    env: *mut FdasimEnv,
}

impl Handles {
    fn new(n: usize, offsets: Option<&[f64]>) -> Self {
        let mut w = vec![0.0; n];
        let mut array = ptr::null_mut();
        let mut env = ptr::null_mut();
        unsafe {
            assert_eq!(
                fdasim_chebyshev_taper(n, 30.0, w.as_mut_ptr(), w.len()),
                FdasimStatus::Ok
            );
            let df = offsets.map_or(ptr::null(), <[f64]>::as_ptr);
            assert_eq!(
                fdasim_array_new(n, 0.015, 10e9, w.as_ptr(), ptr::null(), df, &mut array),
                FdasimStatus::Ok
            );
            assert_eq!(
                fdasim_env_new(C, 1.0, ptr::null(), 0, &mut env),
                FdasimStatus::Ok
            );
        }
        Handles { array, env }
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            fdasim_array_free(self.array);
            fdasim_env_free(self.env);
        }
    }
}

fn grid(n_range: usize, n_theta: usize, t_s: f64) -> FdasimGrid {
    FdasimGrid {
        r_min_m: 1e3,
        r_max_m: 400e3,
        n_range,
        theta_min_rad: -std::f64::consts::FRAC_PI_2,
        theta_max_rad: std::f64::consts::FRAC_PI_2,
        n_theta,
        t_s,
    }
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(fdasim_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn array_factor_matches_core() {
    let h = Handles::new(15, None);
    let (mut re, mut im) = (0.0, 0.0);
    unsafe {
        assert_eq!(fdasim_array_n_elements(h.array), 15);
        assert_eq!(
            fdasim_af_approx(h.array, h.env, 0.0, 1e5, 0.0, &mut re, &mut im),
            FdasimStatus::Ok
        );
    }
    let w = fdasim::chebyshev_taper(15, 30.0).unwrap();
    let sum: f64 = w.iter().sum();
    assert!((re - sum).abs() < 1e-12 && im.abs() < 1e-12);
}

#[test]
fn equivalent_phases_reproduce_fda() {
    let offsets = fdasim::chebyshev_offsets(9, 5e3, 30.0).unwrap();
    let fda = Handles::new(9, Some(&offsets));
    let (t, r, theta) = (1.2e-3, 250e3, 0.3);
    let mut phases = vec![0.0; 9];
    let (mut a_re, mut a_im, mut b_re, mut b_im) = (0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(
            fdasim_equivalent_phases(fda.array, fda.env, t, r, phases.as_mut_ptr(), 9),
            FdasimStatus::Ok
        );
        fdasim_af_approx(fda.array, fda.env, t, r, theta, &mut a_re, &mut a_im);
        let mut w = vec![0.0; 9];
        fdasim_chebyshev_taper(9, 30.0, w.as_mut_ptr(), 9);
        let mut pa = ptr::null_mut();
        fdasim_array_new(
            9,
            0.015,
            10e9,
            w.as_ptr(),
            phases.as_ptr(),
            ptr::null(),
            &mut pa,
        );
        fdasim_af_approx(pa, fda.env, 0.0, 1.0, theta, &mut b_re, &mut b_im);
        fdasim_array_free(pa);
    }
    assert!((a_re - b_re).abs() < 1e-12 && (a_im - b_im).abs() < 1e-12);
}

#[test]
fn pulse_helpers() {
    let gauss = FdasimPulse {
        kind: FdasimPulseKind::Gaussian,
        center_s: -1e-3,
        param_s: 0.15e-3,
    };
    let cw = FdasimPulse {
        kind: FdasimPulseKind::Cw,
        center_s: 0.0,
        param_s: 0.0,
    };
    let mut w = 0.0;
    let mut e = 0.0;
    unsafe {
        assert_eq!(fdasim_fwhm(&gauss, &mut w), FdasimStatus::Ok);
        assert_eq!(fdasim_envelope(&gauss, -1e-3, &mut e), FdasimStatus::Ok);
        assert_eq!(fdasim_fwhm(&cw, &mut w), FdasimStatus::Incompatible);
    }
    assert!((w - 0.35322e-3).abs() < 1e-8);
    assert_eq!(e, 1.0);
    assert!(last_error().contains("unbounded"));
}

#[test]
fn received_signal_delay() {
    let h = Handles::new(1, None);
    let rect = FdasimPulse {
        kind: FdasimPulseKind::Rect,
        center_s: 0.5e-3,
        param_s: 1e-3,
    };
    let (mut re, mut im) = (0.0, 0.0);
    unsafe {
        let s = fdasim_received_signal(
            h.array, h.env, &rect, 0.5e-3, 150e3, 0.0, true, &mut re, &mut im,
        );
        assert_eq!(s, FdasimStatus::Ok);
        assert_eq!((re, im), (1.0 / (150e3 * 150e3), 0.0));
        let before = f64::from_bits(0.5e-3f64.to_bits() - 1);
        fdasim_received_signal(
            h.array, h.env, &rect, before, 150e3, 0.0, true, &mut re, &mut im,
        );
        assert_eq!((re, im), (0.0, 0.0));
        assert_eq!(
            fdasim_pulsed_pattern(h.array, h.env, &rect, 0.5e-3, 150e3, 0.0, &mut re, &mut im),
            FdasimStatus::Ok
        );
        assert_eq!(re, 1.0);
    }
}

#[test]
fn raster_round_trip_and_focus() {
    let h = Handles::new(15, None);
    let pulse = FdasimPulse {
        kind: FdasimPulseKind::Rect,
        center_s: -1e-3,
        param_s: 0.27e-3,
    };
    let g = grid(512, 33, 0.0);
    let mut raster = ptr::null_mut();
    let mut focus = FdasimFocus::default();
    let (mut nr, mut nt) = (0, 0);
    unsafe {
        assert_eq!(
            fdasim_raster_evaluate(h.array, h.env, &pulse, FdasimMode::Auto, &g, &mut raster),
            FdasimStatus::Ok
        );
        fdasim_raster_dims(raster, &mut nr, &mut nt);
        assert_eq!((nr, nt), (512, 33));
        let mut small = vec![0.0; 10];
        assert_eq!(
            fdasim_raster_values(raster, small.as_mut_ptr(), small.len()),
            FdasimStatus::LengthMismatch
        );
        let mut values = vec![0.0; nr * nt];
        assert_eq!(
            fdasim_raster_values(raster, values.as_mut_ptr(), values.len()),
            FdasimStatus::Ok
        );
        assert_eq!(values[0], 0.0);
        assert_eq!(fdasim_find_focus(raster, &mut focus), FdasimStatus::Ok);

        let dir = tempfile::tempdir().unwrap();
        let csv = CString::new(dir.path().join("r.csv").to_str().unwrap()).unwrap();
        let pgm = CString::new(dir.path().join("r.pgm").to_str().unwrap()).unwrap();
        assert_eq!(
            fdasim_raster_write_csv(raster, csv.as_ptr(), true, -60.0),
            FdasimStatus::Ok
        );
        assert_eq!(
            fdasim_raster_write_pgm(raster, pgm.as_ptr(), -60.0),
            FdasimStatus::Ok
        );
        assert!(std::fs::read(dir.path().join("r.pgm"))
            .unwrap()
            .starts_with(b"P5\n"));
        let bad = CString::new(dir.path().join("no/such/dir.csv").to_str().unwrap()).unwrap();
        assert_eq!(
            fdasim_raster_write_csv(raster, bad.as_ptr(), false, -60.0),
            FdasimStatus::Io
        );
        fdasim_raster_free(raster);
    }
    let cell = 399e3 / 511.0;
    assert!((focus.range_extent_m - 81e3).abs() <= cell);
    assert!((focus.range_center_m - 300e3).abs() <= cell);
}

#[test]
fn errors_are_reported() {
    let h = Handles::new(4, None);
    let mut array = ptr::null_mut();
    let (mut re, mut im) = (0.0, 0.0);
    let mut raster = ptr::null_mut();
    let mut focus = FdasimFocus::default();
    unsafe {
        assert_eq!(
            fdasim_array_new(
                0,
                0.015,
                10e9,
                ptr::null(),
                ptr::null(),
                ptr::null(),
                &mut array
            ),
            FdasimStatus::InvalidArgument
        );
        assert!(array.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            fdasim_array_new(
                2,
                0.015,
                10e9,
                ptr::null(),
                ptr::null(),
                ptr::null(),
                ptr::null_mut()
            ),
            FdasimStatus::NullPointer
        );
        assert_eq!(
            fdasim_af_exact(ptr::null(), h.env, 0.0, 1.0, 0.0, &mut re, &mut im),
            FdasimStatus::NullPointer
        );
        assert_eq!(
            fdasim_af_exact(h.array, h.env, 0.0, 1.0, 0.0, &mut re, ptr::null_mut()),
            FdasimStatus::NullPointer
        );
        assert_eq!(
            fdasim_af_exact(h.array, h.env, 0.0, -1.0, 0.0, &mut re, &mut im),
            FdasimStatus::InvalidArgument
        );

        // pulsed mode requires a pulse; an FDA cannot be pulsed
        let g = grid(8, 8, 0.0);
        assert_eq!(
            fdasim_raster_evaluate(
                h.array,
                h.env,
                ptr::null(),
                FdasimMode::Pulsed,
                &g,
                &mut raster
            ),
            FdasimStatus::Incompatible
        );
        let rect = FdasimPulse {
            kind: FdasimPulseKind::Rect,
            center_s: -1.0,
            param_s: 1e-6,
        };
        assert_eq!(
            fdasim_raster_evaluate(h.array, h.env, &rect, FdasimMode::Pulsed, &g, &mut raster),
            FdasimStatus::Ok
        );
        assert_eq!(fdasim_find_focus(raster, &mut focus), FdasimStatus::NoFocus);
        fdasim_raster_free(raster);

        fdasim_array_free(ptr::null_mut());
        fdasim_env_free(ptr::null_mut());
        fdasim_raster_free(ptr::null_mut());
        assert_eq!(fdasim_array_n_elements(ptr::null()), 0);

        // successful calls clear the message
        assert_eq!(
            fdasim_af_exact(h.array, h.env, 0.0, 1.0, 0.0, &mut re, &mut im),
            FdasimStatus::Ok
        );
        assert_eq!(fdasim_last_error_message(ptr::null_mut(), 0), 1);
    }
}

#[test]
fn error_message_truncates() {
    let mut array = ptr::null_mut();
    unsafe {
        fdasim_array_new(
            3,
            -1.0,
            10e9,
            ptr::null(),
            ptr::null(),
            ptr::null(),
            &mut array,
        );
        let needed = fdasim_last_error_message(ptr::null_mut(), 0);
        assert!(needed > 5);
        let mut buf = [1 as c_char; 5];
        assert_eq!(fdasim_last_error_message(buf.as_mut_ptr(), 5), needed);
        assert_eq!(buf[4], 0);
    }
}

#[test]
fn linear_fda_constructor() {
    let mut array = ptr::null_mut();
    let mut env = ptr::null_mut();
    let (mut a, mut b) = ((0.0, 0.0), (0.0, 0.0));
    unsafe {
        assert_eq!(
            fdasim_array_new_fda_linear(8, 0.015, 10e9, ptr::null(), 1e3, &mut array),
            FdasimStatus::Ok
        );
        fdasim_env_new(C, 1.0, ptr::null(), 0, &mut env);
        // translation along r = c t leaves the approximate pattern unchanged
        fdasim_af_approx(array, env, 1e-3, 200e3, 0.2, &mut a.0, &mut a.1);
        fdasim_af_approx(array, env, 1.5e-3, 350e3, 0.2, &mut b.0, &mut b.1);
        fdasim_array_free(array);
        fdasim_env_free(env);
    }
    assert!((a.0 - b.0).abs() < 1e-11 && (a.1 - b.1).abs() < 1e-11);
}
