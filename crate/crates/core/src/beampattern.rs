//! Array-factor and received-field evaluators.
//!
//! The array factor of element `n` carries three phase terms: the geometric
//! steering term `2 pi f0 n d sin(theta) / c` shared by FDAs and phased
//! arrays, the frequency-offset term `2 pi df_n (t - r/c [- n d sin(theta)/c])`
//! and the static phase `phi_n`. The exact form keeps the per-element delay
//! inside the offset term; the approximate form drops it, which is valid while
//! `N d max|df| << c`.
//!
//! Sign convention: the steering term uses `+n d sin(theta)`, as does the
//! per-element advance in [`received_signal`] (`r_n = r - n d sin(theta)`).
//! Array factors omit the common `k_r / r^2` amplitude and the global carrier
//! `e^{j 2 pi f0 (t - r/c)}`; `received_signal` keeps both. Any global phase
//! difference between the two conventions leaves `|AF|` unchanged.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::array::{ArrayConfig, PropagationEnv};
use crate::error::{invalid, Error, Result};
use crate::waveform::PulseSpec;

/// Observation point: time, range from element 0, and angle off broadside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub t_s: f64,
    pub r_m: f64,
    pub theta_rad: f64,
}

impl FieldPoint {
    pub fn new(t_s: f64, r_m: f64, theta_rad: f64) -> Result<Self> {
        if !t_s.is_finite() {
            return Err(invalid("t_s", format!("must be finite, got {t_s}")));
        }
        if !(r_m.is_finite() && r_m > 0.0) {
            return Err(invalid("r_m", format!("must be finite and > 0, got {r_m}")));
        }
        if !(theta_rad.is_finite() && theta_rad.abs() <= FRAC_PI_2) {
            return Err(invalid(
                "theta_rad",
                format!("must lie in [-pi/2, pi/2], got {theta_rad}"),
            ));
        }
        Ok(Self {
            t_s,
            r_m,
            theta_rad,
        })
    }

    /// `t - r/c`, the only way time and range enter the approximate AF.
    pub fn retarded_time(&self, wave_speed: f64) -> f64 {
        retarded_time(self.t_s, self.r_m, wave_speed)
    }
}

#[inline]
pub fn retarded_time(t_s: f64, r_m: f64, wave_speed: f64) -> f64 {
    t_s - r_m / wave_speed
}

/// One-way propagation delay from the array to range `r_m`.
pub fn propagation_delay(r_m: f64, env: &PropagationEnv) -> f64 {
    r_m / env.wave_speed()
}

/// Exact array factor, keeping the per-element delay inside the offset term.
pub fn af_exact(cfg: &ArrayConfig, env: &PropagationEnv, p: &FieldPoint) -> Complex64 {
    let c = env.wave_speed();
    af_sum(cfg, c, p.retarded_time(c), p.theta_rad.sin(), true)
}

/// Narrowband array factor; depends on `t` and `r` only through `t - r/c`.
pub fn af_approx(cfg: &ArrayConfig, env: &PropagationEnv, p: &FieldPoint) -> Complex64 {
    let c = env.wave_speed();
    af_sum(cfg, c, p.retarded_time(c), p.theta_rad.sin(), false)
}

/// Element sum shared by both AF forms. Summation order is fixed (element 0
/// first) so repeated evaluations are bit-identical.
pub(crate) fn af_sum(
    cfg: &ArrayConfig,
    wave_speed: f64,
    retarded_s: f64,
    sin_theta: f64,
    exact: bool,
) -> Complex64 {
    let f0 = cfg.carrier_hz();
    let d = cfg.spacing_m();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, ((w, phi), df)) in cfg
        .weights()
        .iter()
        .zip(cfg.phases_rad())
        .zip(cfg.freq_offsets_hz())
        .enumerate()
    {
        let advance = n as f64 * d * sin_theta / wave_speed;
        let steer = TAU * f0 * advance;
        let tau = if exact {
            retarded_s - advance
        } else {
            retarded_s
        };
        let phase = steer + TAU * df * tau + phi;
        acc += Complex64::from_polar(*w, phase);
    }
    acc
}

/// Superposed received field with the common gain and carrier retained.
///
/// With `exact_geometry` each element uses its own path length
/// `r_n = r - n d sin(theta)` for both the `1/r_n^2` spreading and the delay.
/// Otherwise the far-field form applies a shared `k_r / r^2` and delay `r/c`
/// with a per-element advance `n d sin(theta) / c`.
pub fn received_signal(
    cfg: &ArrayConfig,
    env: &PropagationEnv,
    pulse: &PulseSpec,
    p: &FieldPoint,
    exact_geometry: bool,
) -> Result<Complex64> {
    env.check_elements(cfg.n_elements())?;
    let c = env.wave_speed();
    let f0 = cfg.carrier_hz();
    let d = cfg.spacing_m();
    let sin_theta = p.theta_rad.sin();
    let excitation = |n: usize, tau: f64| -> Complex64 {
        let a = cfg.weights()[n] * env.tx_gain(n) * pulse.envelope(tau);
        let phase = TAU * (f0 + cfg.freq_offsets_hz()[n]) * tau + cfg.phases_rad()[n];
        Complex64::from_polar(a, phase)
    };

    let mut acc = Complex64::new(0.0, 0.0);
    if exact_geometry {
        for n in 0..cfg.n_elements() {
            let r_n = p.r_m - n as f64 * d * sin_theta;
            if !(r_n > 0.0) {
                return Err(Error::NonPositiveRange {
                    element: n,
                    range_m: r_n,
                });
            }
            acc += excitation(n, p.t_s - r_n / c) * (env.rx_gain() / (r_n * r_n));
        }
    } else {
        let tau = p.retarded_time(c);
        for n in 0..cfg.n_elements() {
            acc += excitation(n, tau + n as f64 * d * sin_theta / c);
        }
        acc *= env.rx_gain() / (p.r_m * p.r_m);
    }
    Ok(acc)
}

/// Pattern of a phased array driven by a pulse envelope. The envelope is
/// evaluated once at the shared retarded time `t - r/c`.
pub fn pulsed_pattern(
    cfg: &ArrayConfig,
    env: &PropagationEnv,
    pulse: &PulseSpec,
    p: &FieldPoint,
) -> Result<Complex64> {
    require_phased_array(cfg)?;
    let c = env.wave_speed();
    let tau = p.retarded_time(c);
    Ok(af_sum(cfg, c, tau, p.theta_rad.sin(), false) * pulse.envelope(tau))
}

pub(crate) fn require_phased_array(cfg: &ArrayConfig) -> Result<()> {
    if cfg.is_phased_array() {
        Ok(())
    } else {
        Err(Error::Incompatible(
            "pulsed excitation requires a phased array (all frequency offsets zero)".into(),
        ))
    }
}

/// Phases of the time-variant phased array that reproduces the FDA's
/// approximate AF at `(t, r)`: `phi_n + 2 pi df_n (t - r/c)`.
pub fn equivalent_phases(cfg: &ArrayConfig, env: &PropagationEnv, t_s: f64, r_m: f64) -> Vec<f64> {
    let tau = retarded_time(t_s, r_m, env.wave_speed());
    cfg.phases_rad()
        .iter()
        .zip(cfg.freq_offsets_hz())
        .map(|(phi, df)| phi + TAU * df * tau)
        .collect()
}

/// The phased array (offsets zeroed) carrying [`equivalent_phases`].
pub fn equivalent_phased_array(
    cfg: &ArrayConfig,
    env: &PropagationEnv,
    t_s: f64,
    r_m: f64,
) -> ArrayConfig {
    cfg.to_phased_array(equivalent_phases(cfg, env, t_s, r_m))
        .expect("phases derived from a valid config are finite")
}

/// `20 log10(mag / peak)` clamped below at `floor_db`.
pub fn to_db(mag: f64, peak: f64, floor_db: f64) -> Result<f64> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(invalid(
            "peak",
            format!("must be finite and > 0, got {peak}"),
        ));
    }
    if !(floor_db < 0.0) {
        return Err(invalid("floor_db", format!("must be < 0, got {floor_db}")));
    }
    if mag <= 0.0 {
        return Ok(floor_db);
    }
    Ok((20.0 * (mag / peak).log10()).max(floor_db))
}

/// Upper bound on `|af_exact - af_approx|` from `|e^{jx} - e^{jy}| <= |x - y|`.
pub fn exact_approx_bound(cfg: &ArrayConfig, env: &PropagationEnv) -> f64 {
    let d = cfg.spacing_m();
    cfg.weights()
        .iter()
        .zip(cfg.freq_offsets_hz())
        .enumerate()
        .map(|(n, (w, df))| w * TAU * df.abs() * n as f64 * d / env.wave_speed())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{chebyshev_offsets, chebyshev_taper, make_fda_linear, make_phased_array};

    fn env3e8() -> PropagationEnv {
        PropagationEnv::with_wave_speed(3e8).unwrap()
    }

    fn pt(t: f64, r: f64, th: f64) -> FieldPoint {
        FieldPoint::new(t, r, th).unwrap()
    }

    #[test]
    fn field_point_validation() {
        assert!(FieldPoint::new(0.0, 0.0, 0.0).is_err());
        assert!(FieldPoint::new(0.0, 1.0, 2.0).is_err());
        assert!(FieldPoint::new(f64::NAN, 1.0, 0.0).is_err());
        assert!(FieldPoint::new(0.0, 1.0, FRAC_PI_2).is_ok());
    }

    #[test]
    fn single_element_af_is_one() {
        let cfg = make_phased_array(1, 0.015, 10e9, vec![1.0], vec![0.0]).unwrap();
        let env = env3e8();
        for p in [pt(0.0, 1.0, 0.0), pt(-3.0, 4e5, 1.2), pt(7e-3, 12.5, -0.7)] {
            assert_eq!(af_exact(&cfg, &env, &p), Complex64::new(1.0, 0.0));
            assert_eq!(af_approx(&cfg, &env, &p), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn two_element_endfire_null() {
        let env = env3e8();
        let d = crate::array::half_wavelength(10e9, 3e8);
        let cfg = make_phased_array(2, d, 10e9, vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
        let v = af_exact(&cfg, &env, &pt(0.0, 1e3, FRAC_PI_2));
        assert!(v.norm() < 1e-15, "{v}");
    }

    #[test]
    fn broadside_zero_offsets_sums_weights() {
        let env = env3e8();
        let w = chebyshev_taper(15, 30.0).unwrap();
        let sum: f64 = w.iter().sum();
        let cfg = make_phased_array(15, 0.015, 10e9, w, vec![0.0; 15]).unwrap();
        for p in [pt(0.0, 1.0, 0.0), pt(1.0, 3e5, 0.0), pt(-2e-3, 7e4, 0.0)] {
            let v = af_exact(&cfg, &env, &p);
            assert!((v.re - sum).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn approx_equals_exact_without_offsets() {
        let env = env3e8();
        let cfg =
            make_phased_array(5, 0.02, 9e9, vec![1.0, 0.5, 0.7, 0.2, 1.0], vec![0.3; 5]).unwrap();
        let p = pt(1e-3, 2e5, 0.4);
        assert_eq!(af_exact(&cfg, &env, &p), af_approx(&cfg, &env, &p));
    }

    #[test]
    fn received_single_element_delay_and_phase() {
        let env = env3e8();
        let cfg = make_phased_array(1, 0.015, 10e9, vec![1.0], vec![0.0]).unwrap();
        assert_eq!(propagation_delay(150e3, &env), 0.5e-3);
        // a rect that switches on at t = 0 is first seen at r = 150 km at 0.5 ms
        let pulse = PulseSpec::rect(0.5e-3, 1e-3).unwrap();
        for exact in [true, false] {
            let on = received_signal(&cfg, &env, &pulse, &pt(0.5e-3, 150e3, 0.3), exact).unwrap();
            let before =
                received_signal(&cfg, &env, &pulse, &pt(0.5e-3 - 1e-12, 150e3, 0.3), exact)
                    .unwrap();
            assert!(on.norm() > 0.0);
            assert_eq!(before.norm(), 0.0);
        }
        let t = 0.7e-3;
        let v = received_signal(&cfg, &env, &PulseSpec::Cw, &pt(t, 150e3, 0.0), false).unwrap();
        let expect = Complex64::from_polar(1.0 / (150e3 * 150e3), TAU * 10e9 * (t - 0.5e-3));
        assert!((v - expect).norm() <= 1e-6 * expect.norm());
    }

    #[test]
    fn received_inverse_square() {
        let env = PropagationEnv::new(3e8, 2.5, Some(vec![0.8])).unwrap();
        let cfg = make_phased_array(1, 0.015, 10e9, vec![1.0], vec![0.0]).unwrap();
        for exact in [true, false] {
            let a = received_signal(&cfg, &env, &PulseSpec::Cw, &pt(0.0, 5e4, 0.2), exact).unwrap();
            let b = received_signal(&cfg, &env, &PulseSpec::Cw, &pt(0.0, 1e5, 0.2), exact).unwrap();
            assert!((a.norm() / b.norm() - 4.0).abs() < 1e-12);
            assert!((a.norm() - 2.5 * 0.8 / 2.5e9).abs() < 1e-24);
        }
    }

    #[test]
    fn received_rejects_nonpositive_element_range() {
        let env = env3e8();
        let cfg = make_phased_array(3, 1.0, 1e9, vec![1.0; 3], vec![0.0; 3]).unwrap();
        let err = received_signal(&cfg, &env, &PulseSpec::Cw, &pt(0.0, 1.5, 1.0), true);
        assert!(matches!(
            err,
            Err(Error::NonPositiveRange { element: 2, .. })
        ));
        let bad_env = PropagationEnv::new(3e8, 1.0, Some(vec![1.0])).unwrap();
        assert!(
            received_signal(&cfg, &bad_env, &PulseSpec::Cw, &pt(0.0, 10.0, 0.0), false).is_err()
        );
    }

    #[test]
    fn pulsed_pattern_rect_band() {
        let env = env3e8();
        let w = chebyshev_taper(15, 30.0).unwrap();
        let cfg = make_phased_array(15, 0.015, 10e9, w, vec![0.0; 15]).unwrap();
        let pulse = PulseSpec::rect(-1e-3, 0.27e-3).unwrap();
        let inside = pulsed_pattern(&cfg, &env, &pulse, &pt(0.0, 300e3, 0.1)).unwrap();
        assert!(inside.norm() > 0.0);
        for r in [250e3, 259e3, 341e3, 380e3] {
            for th in [-1.0, 0.0, 0.4] {
                assert_eq!(
                    pulsed_pattern(&cfg, &env, &pulse, &pt(0.0, r, th))
                        .unwrap()
                        .norm(),
                    0.0
                );
            }
        }
        let cw = pulsed_pattern(&cfg, &env, &PulseSpec::Cw, &pt(0.0, 42e3, 0.3)).unwrap();
        assert_eq!(cw, af_approx(&cfg, &env, &pt(0.0, 42e3, 0.3)));

        let fda = make_fda_linear(3, 0.015, 10e9, 1e3, vec![1.0; 3], vec![0.0; 3]).unwrap();
        assert!(matches!(
            pulsed_pattern(&fda, &env, &pulse, &pt(0.0, 1e3, 0.0)),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn equivalent_phases_trivial_cases() {
        let env = env3e8();
        let pa = make_phased_array(3, 0.015, 10e9, vec![1.0; 3], vec![0.1, 0.2, 0.3]).unwrap();
        assert_eq!(equivalent_phases(&pa, &env, 1e-3, 5e4), vec![0.1, 0.2, 0.3]);
        let off = chebyshev_offsets(7, 5e3, 30.0).unwrap();
        let fda = ArrayConfig::new(7, 0.015, 10e9, vec![1.0; 7], vec![0.5; 7], off).unwrap();
        assert_eq!(equivalent_phases(&fda, &env, 1e-3, 3e5), vec![0.5; 7]);
    }

    #[test]
    fn equivalent_array_matches_fda() {
        let env = env3e8();
        let off = chebyshev_offsets(15, 5e3, 30.0).unwrap();
        let w = chebyshev_taper(15, 30.0).unwrap();
        let fda = ArrayConfig::new(15, 0.015, 10e9, w, vec![0.0; 15], off).unwrap();
        let (t, r) = (0.4e-3, 2.2e5);
        let pa = equivalent_phased_array(&fda, &env, t, r);
        assert!(pa.is_phased_array());
        for i in 0..64 {
            let th = -1.5 + 3.0 * i as f64 / 63.0;
            let a = af_approx(&fda, &env, &pt(t, r, th));
            // the phased array is time-invariant: evaluate anywhere
            let b = af_approx(&pa, &env, &pt(9.0, 1.0, th));
            assert!((a - b).norm() < 1e-12 * fda.weight_sum());
        }
    }

    #[test]
    fn db_conversion() {
        assert_eq!(to_db(2.0, 2.0, -60.0).unwrap(), 0.0);
        assert!((to_db(0.1, 1.0, -60.0).unwrap() + 20.0).abs() < 1e-12);
        assert_eq!(to_db(0.0, 1.0, -60.0).unwrap(), -60.0);
        assert_eq!(to_db(1e-9, 1.0, -60.0).unwrap(), -60.0);
        assert!(to_db(1.0, 0.0, -60.0).is_err());
        assert!(to_db(1.0, 1.0, 0.0).is_err());
    }
}
