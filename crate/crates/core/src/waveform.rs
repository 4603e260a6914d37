//! Excitation envelopes for pulsed operation.

use crate::error::{invalid, Error, Result};

/// `FWHM / sigma` for a Gaussian, `2 sqrt(2 ln 2)`.
pub const GAUSSIAN_FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseSpec {
    /// Continuous wave, envelope 1 at all times.
    Cw,
    /// 1 on `[center - width/2, center + width/2)`, 0 elsewhere.
    Rect {
        center_s: f64,
        width_s: f64,
    },
    Gaussian {
        center_s: f64,
        sigma_s: f64,
    },
}

impl PulseSpec {
    pub fn rect(center_s: f64, width_s: f64) -> Result<Self> {
        check_time("center_s", center_s)?;
        check_duration("width_s", width_s)?;
        Ok(Self::Rect { center_s, width_s })
    }

    pub fn gaussian(center_s: f64, sigma_s: f64) -> Result<Self> {
        check_time("center_s", center_s)?;
        check_duration("sigma_s", sigma_s)?;
        Ok(Self::Gaussian { center_s, sigma_s })
    }

    /// Re-checks the invariants of a value built directly from its variant.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Cw => Ok(()),
            Self::Rect { center_s, width_s } => Self::rect(center_s, width_s).map(|_| ()),
            Self::Gaussian { center_s, sigma_s } => Self::gaussian(center_s, sigma_s).map(|_| ()),
        }
    }

    pub fn is_cw(&self) -> bool {
        matches!(self, Self::Cw)
    }

    pub fn envelope(&self, t: f64) -> f64 {
        envelope(self, t)
    }

    pub fn fwhm(&self) -> Result<f64> {
        fwhm(self)
    }
}

fn check_time(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {v}")))
    }
}

fn check_duration(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

pub fn envelope(pulse: &PulseSpec, t: f64) -> f64 {
    match *pulse {
        PulseSpec::Cw => 1.0,
        PulseSpec::Rect { center_s, width_s } => {
            let half = 0.5 * width_s;
            if t >= center_s - half && t < center_s + half {
                1.0
            } else {
                0.0
            }
        }
        PulseSpec::Gaussian { center_s, sigma_s } => {
            let u = (t - center_s) / sigma_s;
            (-0.5 * u * u).exp()
        }
    }
}

/// Full width at half maximum. CW has none.
pub fn fwhm(pulse: &PulseSpec) -> Result<f64> {
    match *pulse {
        PulseSpec::Cw => Err(Error::UnboundedSupport),
        PulseSpec::Rect { width_s, .. } => Ok(width_s),
        PulseSpec::Gaussian { sigma_s, .. } => Ok(GAUSSIAN_FWHM_PER_SIGMA * sigma_s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fwhm_constant_matches_closed_form() {
        let exact = 2.0 * (2.0 * std::f64::consts::LN_2).sqrt();
        assert!((GAUSSIAN_FWHM_PER_SIGMA - exact).abs() < 1e-15);
    }

    #[test]
    fn gaussian_peak_and_half_max() {
        let p = PulseSpec::gaussian(-1e-3, 0.15e-3).unwrap();
        assert_eq!(p.envelope(-1e-3), 1.0);
        let w = p.fwhm().unwrap();
        assert!((w - 0.353_223e-3).abs() < 1e-9);
        assert!((w - 0.35e-3).abs() < 0.005e-3);
        assert!((p.envelope(-1e-3 + 0.5 * w) - 0.5).abs() < 1e-12);
        assert!((p.envelope(-1e-3 - 0.5 * w) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unit_sigma_fwhm_against_root_find() {
        let p = PulseSpec::gaussian(0.0, 1.0).unwrap();
        // bisection for envelope(t) = 0.5 on t > 0
        let (mut lo, mut hi) = (0.0, 5.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if p.envelope(mid) > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let numeric = 2.0 * 0.5 * (lo + hi);
        assert!((numeric - 2.354_82).abs() < 1e-5);
        assert!((p.fwhm().unwrap() - numeric).abs() < 1e-12);
    }

    #[test]
    fn rect_support_is_half_open() {
        let p = PulseSpec::rect(0.0, 0.27e-3).unwrap();
        assert_eq!(p.envelope(0.2e-3), 0.0);
        assert_eq!(p.envelope(-0.135e-3), 1.0);
        assert_eq!(p.envelope(0.135e-3), 0.0);
        assert_eq!(p.envelope(0.0), 1.0);
        assert_eq!(p.fwhm().unwrap(), 0.27e-3);
    }

    #[test]
    fn abutting_rects_tile() {
        let a = PulseSpec::rect(0.5, 1.0).unwrap();
        let b = PulseSpec::rect(1.5, 1.0).unwrap();
        for i in 0..=200 {
            let t = i as f64 * 0.01;
            let sum = a.envelope(t) + b.envelope(t);
            assert_eq!(sum, if t < 2.0 { 1.0 } else { 0.0 }, "t = {t}");
        }
    }

    #[test]
    fn cw_is_flat_and_unbounded() {
        assert_eq!(PulseSpec::Cw.envelope(-1e9), 1.0);
        assert_eq!(PulseSpec::Cw.fwhm(), Err(Error::UnboundedSupport));
    }

    #[test]
    fn constructors_reject_bad_durations() {
        assert!(PulseSpec::rect(0.0, 0.0).is_err());
        assert!(PulseSpec::gaussian(0.0, -1.0).is_err());
        assert!(PulseSpec::gaussian(f64::NAN, 1.0).is_err());
        assert!(PulseSpec::Rect {
            center_s: 0.0,
            width_s: -1.0
        }
        .validate()
        .is_err());
    }
}
