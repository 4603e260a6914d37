//! Linear array geometry and per-element excitation.
//!
//! Elements are indexed `0..N`; element 0 sits at the reference position and
//! radiates at the carrier `f0`. Element `n` sits at `n * d` along the array
//! axis and radiates at `f0 + offset[n]`.

use crate::error::{invalid, Error, Result};

/// Exact speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Rounded speed of light, matching hand arithmetic such as 150 km / c = 0.5 ms.
pub const SPEED_OF_LIGHT_ROUNDED: f64 = 3.0e8;

pub const DEFAULT_CARRIER_HZ: f64 = 10.0e9;

/// Default sidelobe attenuation for Chebyshev tapers when none is given.
pub const DEFAULT_SIDELOBE_DB: f64 = 30.0;

/// Half of the free-space wavelength at `carrier_hz`.
pub fn half_wavelength(carrier_hz: f64, wave_speed: f64) -> f64 {
    0.5 * wave_speed / carrier_hz
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayConfig {
    spacing_m: f64,
    carrier_hz: f64,
    weights: Vec<f64>,
    phases_rad: Vec<f64>,
    freq_offsets_hz: Vec<f64>,
}

impl ArrayConfig {
    /// Builds a config with explicit per-element weights, phases and
    /// frequency offsets. All three lists must have `n` entries.
    pub fn new(
        n: usize,
        spacing_m: f64,
        carrier_hz: f64,
        weights: Vec<f64>,
        phases_rad: Vec<f64>,
        freq_offsets_hz: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n_elements", "must be at least 1"));
        }
        if !(spacing_m.is_finite() && spacing_m > 0.0) {
            return Err(invalid(
                "spacing_m",
                format!("must be finite and > 0, got {spacing_m}"),
            ));
        }
        if !(carrier_hz.is_finite() && carrier_hz > 0.0) {
            return Err(invalid(
                "carrier_hz",
                format!("must be finite and > 0, got {carrier_hz}"),
            ));
        }
        check_len("weights", n, &weights)?;
        check_len("phases", n, &phases_rad)?;
        check_len("freq_offsets", n, &freq_offsets_hz)?;
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(invalid(
                "weights",
                format!("must be finite and >= 0, got {w}"),
            ));
        }
        if let Some(p) = phases_rad.iter().find(|p| !p.is_finite()) {
            return Err(invalid("phases", format!("must be finite, got {p}")));
        }
        if let Some(f) = freq_offsets_hz.iter().find(|f| !f.is_finite()) {
            return Err(invalid("freq_offsets", format!("must be finite, got {f}")));
        }
        Ok(Self {
            spacing_m,
            carrier_hz,
            weights,
            phases_rad,
            freq_offsets_hz,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.weights.len()
    }

    pub fn spacing_m(&self) -> f64 {
        self.spacing_m
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn phases_rad(&self) -> &[f64] {
        &self.phases_rad
    }

    pub fn freq_offsets_hz(&self) -> &[f64] {
        &self.freq_offsets_hz
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn max_abs_offset_hz(&self) -> f64 {
        self.freq_offsets_hz.iter().fold(0.0, |m, f| m.max(f.abs()))
    }

    /// True when every element radiates at the carrier (a plain phased array).
    pub fn is_phased_array(&self) -> bool {
        self.freq_offsets_hz.iter().all(|f| *f == 0.0)
    }

    /// Same geometry and weights, frequency offsets cleared, phases replaced.
    pub fn to_phased_array(&self, phases_rad: Vec<f64>) -> Result<Self> {
        let n = self.n_elements();
        Self::new(
            n,
            self.spacing_m,
            self.carrier_hz,
            self.weights.clone(),
            phases_rad,
            vec![0.0; n],
        )
    }
}

fn check_len(name: &'static str, expected: usize, values: &[f64]) -> Result<()> {
    if values.len() != expected {
        return Err(Error::LengthMismatch {
            name,
            expected,
            actual: values.len(),
        });
    }
    Ok(())
}

pub fn make_phased_array(
    n: usize,
    spacing_m: f64,
    carrier_hz: f64,
    weights: Vec<f64>,
    phases_rad: Vec<f64>,
) -> Result<ArrayConfig> {
    ArrayConfig::new(n, spacing_m, carrier_hz, weights, phases_rad, vec![0.0; n])
}

/// FDA with a linear frequency progression: element `n` is offset by
/// `n * base_offset_hz`.
pub fn make_fda_linear(
    n: usize,
    spacing_m: f64,
    carrier_hz: f64,
    base_offset_hz: f64,
    weights: Vec<f64>,
    phases_rad: Vec<f64>,
) -> Result<ArrayConfig> {
    if !base_offset_hz.is_finite() {
        return Err(invalid(
            "base_offset_hz",
            format!("must be finite, got {base_offset_hz}"),
        ));
    }
    let offsets = (0..n).map(|i| i as f64 * base_offset_hz).collect();
    ArrayConfig::new(n, spacing_m, carrier_hz, weights, phases_rad, offsets)
}

/// Wave speed and gain constants. The per-element gain product is
/// `tx_gain(n) * rx_gain`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationEnv {
    wave_speed: f64,
    rx_gain: f64,
    /// `None` means unity gain on every element.
    tx_gains: Option<Vec<f64>>,
}

impl Default for PropagationEnv {
    fn default() -> Self {
        Self {
            wave_speed: SPEED_OF_LIGHT,
            rx_gain: 1.0,
            tx_gains: None,
        }
    }
}

impl PropagationEnv {
    pub fn new(wave_speed: f64, rx_gain: f64, tx_gains: Option<Vec<f64>>) -> Result<Self> {
        if !(wave_speed.is_finite() && wave_speed > 0.0) {
            return Err(invalid(
                "wave_speed",
                format!("must be finite and > 0, got {wave_speed}"),
            ));
        }
        let gain_ok = |g: &f64| g.is_finite() && *g > 0.0;
        if !gain_ok(&rx_gain) {
            return Err(invalid(
                "rx_gain",
                format!("must be finite and > 0, got {rx_gain}"),
            ));
        }
        if let Some(g) = tx_gains.iter().flatten().find(|g| !gain_ok(g)) {
            return Err(invalid(
                "tx_gain",
                format!("must be finite and > 0, got {g}"),
            ));
        }
        Ok(Self {
            wave_speed,
            rx_gain,
            tx_gains,
        })
    }

    /// Unity gains with the given wave speed.
    pub fn with_wave_speed(wave_speed: f64) -> Result<Self> {
        Self::new(wave_speed, 1.0, None)
    }

    pub fn wave_speed(&self) -> f64 {
        self.wave_speed
    }

    pub fn rx_gain(&self) -> f64 {
        self.rx_gain
    }

    pub fn tx_gains(&self) -> Option<&[f64]> {
        self.tx_gains.as_deref()
    }

    pub fn tx_gain(&self, element: usize) -> f64 {
        self.tx_gains.as_ref().map_or(1.0, |g| g[element])
    }

    /// Fails when explicit transmit gains do not cover every element.
    pub fn check_elements(&self, n: usize) -> Result<()> {
        match &self.tx_gains {
            Some(g) => check_len("tx_gains", n, g),
            None => Ok(()),
        }
    }
}

/// Whether an observation satisfies the far-field and narrowband
/// approximations, with the margin by which it does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub farfield_ok: bool,
    /// `r / ((N-1) d)`; infinite for a single element.
    pub farfield_margin: f64,
    pub narrowband_ok: bool,
    /// `c / (N d max|offset|)`; infinite for a phased array.
    pub narrowband_margin: f64,
}

pub fn check_validity(
    cfg: &ArrayConfig,
    env: &PropagationEnv,
    range_m: f64,
    farfield_factor: f64,
    narrowband_factor: f64,
) -> Result<ValidityReport> {
    if !(range_m.is_finite() && range_m > 0.0) {
        return Err(invalid(
            "range_m",
            format!("must be finite and > 0, got {range_m}"),
        ));
    }
    if !(farfield_factor > 1.0) {
        return Err(invalid("farfield_factor", "must be > 1"));
    }
    if !(narrowband_factor > 1.0) {
        return Err(invalid("narrowband_factor", "must be > 1"));
    }
    let n = cfg.n_elements() as f64;
    let aperture = (n - 1.0) * cfg.spacing_m();
    let spread = n * cfg.spacing_m() * cfg.max_abs_offset_hz();
    let c = env.wave_speed();
    Ok(ValidityReport {
        farfield_ok: range_m >= farfield_factor * aperture,
        farfield_margin: range_m / aperture,
        narrowband_ok: c >= narrowband_factor * spread,
        narrowband_margin: c / spread,
    })
}

/// Chebyshev polynomial of the first kind, valid for any real argument.
pub(crate) fn chebyshev_poly(order: usize, x: f64) -> f64 {
    let m = order as f64;
    if x.abs() <= 1.0 {
        (m * x.acos()).cos()
    } else if x > 1.0 {
        (m * x.acosh()).cosh()
    } else {
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * (m * (-x).acosh()).cosh()
    }
}

/// Dolph-Chebyshev amplitude taper with sidelobes `sidelobe_db` below the
/// mainlobe for half-wavelength spacing. Symmetric, peak weight 1.
///
/// The pattern `sum_n w_n e^{j n psi}` of the taper equals
/// `e^{j (N-1) psi / 2} T_{N-1}(x0 cos(psi / 2))`. Sampling it at the `N`
/// points `psi_k = 2 pi k / N` and inverting the DFT recovers the weights.
pub fn chebyshev_taper(n: usize, sidelobe_db: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(sidelobe_db.is_finite() && sidelobe_db > 0.0) {
        return Err(invalid(
            "sidelobe_db",
            format!("must be finite and > 0, got {sidelobe_db}"),
        ));
    }
    if n <= 2 {
        return Ok(vec![1.0; n]);
    }
    let order = n - 1;
    let ratio = 10f64.powf(sidelobe_db / 20.0);
    let x0 = (ratio.acosh() / order as f64).cosh();
    let nf = n as f64;
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let kf = k as f64;
            let amp = chebyshev_poly(order, x0 * (std::f64::consts::PI * kf / nf).cos());
            let arg = std::f64::consts::PI * kf * order as f64 / nf;
            (amp * arg.cos(), amp * arg.sin())
        })
        .collect();
    let mut weights: Vec<f64> = (0..n)
        .map(|i| {
            let sum: f64 = samples
                .iter()
                .enumerate()
                .map(|(k, (re, im))| {
                    let arg = -2.0 * std::f64::consts::PI * (i * k % n) as f64 / nf;
                    re * arg.cos() - im * arg.sin()
                })
                .sum();
            sum / nf
        })
        .collect();
    for i in 0..n / 2 {
        let avg = 0.5 * (weights[i] + weights[n - 1 - i]);
        weights[i] = avg;
        weights[n - 1 - i] = avg;
    }
    let peak = weights.iter().cloned().fold(f64::MIN, f64::max);
    for w in &mut weights {
        *w /= peak;
    }
    Ok(weights)
}

/// Chebyshev-shaped frequency offsets: the taper min-max rescaled onto
/// `[0, max_offset_hz]`. A constant taper (N <= 2) maps to all zeros.
pub fn chebyshev_offsets(n: usize, max_offset_hz: f64, sidelobe_db: f64) -> Result<Vec<f64>> {
    if !(max_offset_hz.is_finite() && max_offset_hz > 0.0) {
        return Err(invalid(
            "max_offset_hz",
            format!("must be finite and > 0, got {max_offset_hz}"),
        ));
    }
    let taper = chebyshev_taper(n, sidelobe_db)?;
    let lo = taper.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = taper.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span <= 1e-12 * hi.abs() {
        return Ok(vec![0.0; n]);
    }
    Ok(taper
        .iter()
        .map(|w| ((w - lo) / span * max_offset_hz).clamp(0.0, max_offset_hz))
        .collect())
}
