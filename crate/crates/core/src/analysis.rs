//! Range-angle raster evaluation and focus measurements.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::array::{ArrayConfig, PropagationEnv};
use crate::beampattern::{af_sum, equivalent_phased_array, require_phased_array, retarded_time};
use crate::error::{invalid, Error, Result};
use crate::waveform::PulseSpec;

/// Uniform, endpoint-inclusive sampling of range and angle at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_min_m: f64,
    pub r_max_m: f64,
    pub n_range: usize,
    pub theta_min_rad: f64,
    pub theta_max_rad: f64,
    pub n_theta: usize,
    pub t_s: f64,
}

impl Default for GridSpec {
    /// 1 to 400 km, -90 to 90 degrees, 512 x 512, t = 0.
    fn default() -> Self {
        Self {
            r_min_m: 1e3,
            r_max_m: 400e3,
            n_range: 512,
            theta_min_rad: -FRAC_PI_2,
            theta_max_rad: FRAC_PI_2,
            n_theta: 512,
            t_s: 0.0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min_m.is_finite() && self.r_max_m.is_finite() && self.r_min_m > 0.0) {
            return Err(invalid(
                "r_min_m",
                "range bounds must be finite with r_min > 0",
            ));
        }
        if !(self.r_min_m < self.r_max_m) {
            return Err(invalid("r_max_m", "must exceed r_min_m"));
        }
        if self.n_range < 2 {
            return Err(invalid("n_range", "must be at least 2"));
        }
        if self.n_theta < 2 {
            return Err(invalid("n_theta", "must be at least 2"));
        }
        let in_bounds = |a: f64| a.is_finite() && a.abs() <= FRAC_PI_2;
        if !(in_bounds(self.theta_min_rad) && in_bounds(self.theta_max_rad)) {
            return Err(invalid("theta", "angle bounds must lie in [-pi/2, pi/2]"));
        }
        if !(self.theta_min_rad < self.theta_max_rad) {
            return Err(invalid("theta_max_rad", "must exceed theta_min_rad"));
        }
        if !self.t_s.is_finite() {
            return Err(invalid("t_s", "must be finite"));
        }
        Ok(())
    }

    pub fn range_step(&self) -> f64 {
        (self.r_max_m - self.r_min_m) / (self.n_range - 1) as f64
    }

    pub fn theta_step(&self) -> f64 {
        (self.theta_max_rad - self.theta_min_rad) / (self.n_theta - 1) as f64
    }

    pub fn range_at(&self, i: usize) -> f64 {
        linspace_at(self.r_min_m, self.r_max_m, self.n_range, i)
    }

    pub fn theta_at(&self, j: usize) -> f64 {
        linspace_at(self.theta_min_rad, self.theta_max_rad, self.n_theta, j)
    }

    pub fn ranges(&self) -> Vec<f64> {
        (0..self.n_range).map(|i| self.range_at(i)).collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n_theta).map(|j| self.theta_at(j)).collect()
    }

    pub fn at_time(&self, t_s: f64) -> Self {
        Self { t_s, ..*self }
    }

    /// Later snapshot with the range window moved outward by `wave_speed * dt`.
    pub fn translated(&self, dt: f64, wave_speed: f64) -> Self {
        let shift = wave_speed * dt;
        Self {
            r_min_m: self.r_min_m + shift,
            r_max_m: self.r_max_m + shift,
            t_s: self.t_s + dt,
            ..*self
        }
    }
}

fn linspace_at(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / (n - 1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternMode {
    /// Continuous-wave phased array.
    Cw,
    FdaExact,
    FdaApprox,
    /// Phased array scaled by a pulse envelope at `t - r/c`.
    Pulsed,
    /// Time-variant phased array whose phases reproduce the FDA at each
    /// range row.
    EquivalentPa,
}

impl PatternMode {
    pub const ALL: [PatternMode; 5] = [
        PatternMode::Cw,
        PatternMode::FdaExact,
        PatternMode::FdaApprox,
        PatternMode::Pulsed,
        PatternMode::EquivalentPa,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PatternMode::Cw => "cw",
            PatternMode::FdaExact => "fda_exact",
            PatternMode::FdaApprox => "fda_approx",
            PatternMode::Pulsed => "pulsed",
            PatternMode::EquivalentPa => "equivalent_pa",
        }
    }

    /// Mode implied by the inputs: FDA when any offset is nonzero, pulsed
    /// when a non-CW pulse drives a phased array, CW otherwise.
    pub fn infer(cfg: &ArrayConfig, pulse: Option<&PulseSpec>) -> Self {
        if !cfg.is_phased_array() {
            PatternMode::FdaApprox
        } else if pulse.is_some_and(|p| !p.is_cw()) {
            PatternMode::Pulsed
        } else {
            PatternMode::Cw
        }
    }

    pub fn check_inputs(&self, cfg: &ArrayConfig, pulse: Option<&PulseSpec>) -> Result<()> {
        let non_cw_pulse = pulse.is_some_and(|p| !p.is_cw());
        match self {
            PatternMode::Cw => {
                require_phased_array(cfg).map_err(|_| {
                    Error::Incompatible("cw mode requires zero frequency offsets".into())
                })?;
                if non_cw_pulse {
                    return Err(Error::Incompatible("cw mode does not take a pulse".into()));
                }
            }
            PatternMode::FdaExact | PatternMode::FdaApprox | PatternMode::EquivalentPa => {
                if non_cw_pulse {
                    return Err(Error::Incompatible(format!(
                        "{} mode does not support pulsed excitation",
                        self.as_str()
                    )));
                }
            }
            PatternMode::Pulsed => {
                if pulse.is_none() {
                    return Err(Error::Incompatible("pulsed mode requires a pulse".into()));
                }
                require_phased_array(cfg)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for PatternMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| invalid("mode", format!("unknown mode `{s}`")))
    }
}

/// Short hex digest identifying the inputs behind a raster.
pub fn fingerprint(cfg: &ArrayConfig, env: &PropagationEnv, pulse: Option<&PulseSpec>) -> String {
    let mut h = Sha256::new();
    let mut put = |tag: &str, v: f64| {
        h.update(tag.as_bytes());
        h.update(v.to_bits().to_le_bytes());
    };
    put("n", cfg.n_elements() as f64);
    put("d", cfg.spacing_m());
    put("f0", cfg.carrier_hz());
    for ((w, p), df) in cfg
        .weights()
        .iter()
        .zip(cfg.phases_rad())
        .zip(cfg.freq_offsets_hz())
    {
        put("w", *w);
        put("p", *p);
        put("df", *df);
    }
    put("c", env.wave_speed());
    put("kr", env.rx_gain());
    for g in env.tx_gains().unwrap_or(&[]) {
        put("kt", *g);
    }
    match pulse {
        None => put("none", 0.0),
        Some(PulseSpec::Cw) => put("cw", 0.0),
        Some(PulseSpec::Rect { center_s, width_s }) => {
            put("rect", *center_s);
            put("width", *width_s);
        }
        Some(PulseSpec::Gaussian { center_s, sigma_s }) => {
            put("gauss", *center_s);
            put("sigma", *sigma_s);
        }
    }
    h.finalize()[..8]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Pattern magnitudes on a range x angle grid, row-major with range outer.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    pub spec: GridSpec,
    pub mode: PatternMode,
    pub fingerprint: String,
    values: Vec<f64>,
}

impl RasterGrid {
    /// Wraps precomputed magnitudes; `values.len()` must be `n_range * n_theta`.
    pub fn from_values(
        spec: GridSpec,
        mode: PatternMode,
        fingerprint: String,
        values: Vec<f64>,
    ) -> Result<Self> {
        spec.validate()?;
        let expected = spec.n_range * spec.n_theta;
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                name: "values",
                expected,
                actual: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid(
                "values",
                format!("must be finite and >= 0, got {v}"),
            ));
        }
        Ok(Self {
            spec,
            mode,
            fingerprint,
            values,
        })
    }

    pub fn n_range(&self) -> usize {
        self.spec.n_range
    }

    pub fn n_theta(&self) -> usize {
        self.spec.n_theta
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i_range: usize, j_theta: usize) -> f64 {
        self.values[i_range * self.spec.n_theta + j_theta]
    }

    pub fn row(&self, i_range: usize) -> &[f64] {
        let n = self.spec.n_theta;
        &self.values[i_range * n..(i_range + 1) * n]
    }

    pub fn column(&self, j_theta: usize) -> Vec<f64> {
        (0..self.spec.n_range)
            .map(|i| self.get(i, j_theta))
            .collect()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest cell-wise absolute difference; grids must have equal shape.
    pub fn max_abs_diff(&self, other: &RasterGrid) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::LengthMismatch {
                name: "raster",
                expected: self.values.len(),
                actual: other.values.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// Evaluates `|pattern(t, r_i, theta_j)|` on every grid cell. Rows are
/// computed in parallel; each cell's element sum runs in a fixed order, so the
/// result does not depend on scheduling.
pub fn evaluate_raster(
    cfg: &ArrayConfig,
    env: &PropagationEnv,
    pulse: Option<&PulseSpec>,
    mode: PatternMode,
    grid: &GridSpec,
) -> Result<RasterGrid> {
    grid.validate()?;
    if let Some(p) = pulse {
        p.validate()?;
    }
    mode.check_inputs(cfg, pulse)?;

    let c = env.wave_speed();
    let t = grid.t_s;
    let sines: Vec<f64> = grid.thetas().iter().map(|th| th.sin()).collect();
    let envelope = pulse.copied().unwrap_or(PulseSpec::Cw);
    let mut values = vec![0.0; grid.n_range * grid.n_theta];

    values
        .par_chunks_mut(grid.n_theta)
        .enumerate()
        .for_each(|(i, row)| {
            let r = grid.range_at(i);
            let tau = retarded_time(t, r, c);
            match mode {
                PatternMode::Cw | PatternMode::FdaApprox => {
                    for (v, s) in row.iter_mut().zip(&sines) {
                        *v = af_sum(cfg, c, tau, *s, false).norm();
                    }
                }
                PatternMode::FdaExact => {
                    for (v, s) in row.iter_mut().zip(&sines) {
                        *v = af_sum(cfg, c, tau, *s, true).norm();
                    }
                }
                PatternMode::Pulsed => {
                    let a = envelope.envelope(tau);
                    for (v, s) in row.iter_mut().zip(&sines) {
                        *v = (af_sum(cfg, c, tau, *s, false) * a).norm();
                    }
                }
                PatternMode::EquivalentPa => {
                    let pa = equivalent_phased_array(cfg, env, t, r);
                    for (v, s) in row.iter_mut().zip(&sines) {
                        *v = af_sum(&pa, c, tau, *s, false).norm();
                    }
                }
            }
        });

    Ok(RasterGrid {
        spec: *grid,
        mode,
        fingerprint: fingerprint(cfg, env, pulse),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusReport {
    pub peak_range_index: usize,
    pub peak_theta_index: usize,
    pub peak_r_m: f64,
    pub peak_theta_rad: f64,
    pub peak_mag: f64,
    /// Half-maximum span along the range cut through the peak.
    pub range_extent_m: f64,
    /// Midpoint of the half-maximum span in range.
    pub range_center_m: f64,
    /// Half-maximum span along the angle cut through the peak.
    pub theta_extent_rad: f64,
    pub theta_center_rad: f64,
}

/// Locates the global maximum (ties go to the lowest range index, then the
/// lowest angle index) and measures half-maximum widths through it.
pub fn find_focus(raster: &RasterGrid) -> Result<FocusReport> {
    let n_theta = raster.n_theta();
    let mut best = 0usize;
    let mut best_val = raster.values[0];
    for (k, v) in raster.values.iter().enumerate().skip(1) {
        if *v > best_val {
            best = k;
            best_val = *v;
        }
    }
    if !(best_val > 0.0) {
        return Err(Error::NoFocus);
    }
    let (i, j) = (best / n_theta, best % n_theta);
    let spec = &raster.spec;
    let (r_lo, r_hi) = half_max_span(&raster.column(j), i, |k| spec.range_at(k));
    let (t_lo, t_hi) = half_max_span(raster.row(i), j, |k| spec.theta_at(k));
    Ok(FocusReport {
        peak_range_index: i,
        peak_theta_index: j,
        peak_r_m: spec.range_at(i),
        peak_theta_rad: spec.theta_at(j),
        peak_mag: best_val,
        range_extent_m: r_hi - r_lo,
        range_center_m: 0.5 * (r_lo + r_hi),
        theta_extent_rad: t_hi - t_lo,
        theta_center_rad: 0.5 * (t_lo + t_hi),
    })
}

/// Coordinates where the profile falls below half of `values[peak]` on either
/// side, linearly interpolated between samples and clamped to the ends.
fn half_max_span(values: &[f64], peak: usize, coord: impl Fn(usize) -> f64) -> (f64, f64) {
    let half = 0.5 * values[peak];
    let crossing = |inside: usize, outside: usize| {
        let (vi, vo) = (values[inside], values[outside]);
        let frac = (vi - half) / (vi - vo);
        coord(inside) + frac * (coord(outside) - coord(inside))
    };

    let mut lo = peak;
    while lo > 0 && values[lo - 1] >= half {
        lo -= 1;
    }
    let lo_x = if lo == 0 {
        coord(0)
    } else {
        crossing(lo, lo - 1)
    };

    let last = values.len() - 1;
    let mut hi = peak;
    while hi < last && values[hi + 1] >= half {
        hi += 1;
    }
    let hi_x = if hi == last {
        coord(last)
    } else {
        crossing(hi, hi + 1)
    };
    (lo_x, hi_x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftEstimate {
    /// Peak-range velocity in m/s.
    pub speed_m_per_s: f64,
    pub peak_r1_m: f64,
    pub peak_r2_m: f64,
    /// Angle velocity in rad/s; reported, not expected to be meaningful.
    pub theta_rate_rad_per_s: f64,
}

/// Speed of the focus in range between two snapshots on the same grid.
pub fn drift_estimate(
    cfg: &ArrayConfig,
    env: &PropagationEnv,
    pulse: Option<&PulseSpec>,
    mode: PatternMode,
    grid_template: &GridSpec,
    t1: f64,
    t2: f64,
) -> Result<DriftEstimate> {
    if !(t1.is_finite() && t2.is_finite()) || t1 == t2 {
        return Err(invalid("t2", "snapshot times must be finite and distinct"));
    }
    let snapshot = |t: f64| -> Result<FocusReport> {
        let raster = evaluate_raster(cfg, env, pulse, mode, &grid_template.at_time(t))?;
        let focus = find_focus(&raster)?;
        let edge = focus.peak_range_index == 0 || focus.peak_range_index + 1 == raster.n_range();
        let cut = raster.column(focus.peak_theta_index);
        let flat = cut.iter().all(|v| *v == cut[0]);
        if edge && !flat {
            return Err(Error::PeakEscapedGrid { t_s: t });
        }
        Ok(focus)
    };
    let a = snapshot(t1)?;
    let b = snapshot(t2)?;
    let dt = t2 - t1;
    Ok(DriftEstimate {
        speed_m_per_s: (b.peak_r_m - a.peak_r_m) / dt,
        peak_r1_m: a.peak_r_m,
        peak_r2_m: b.peak_r_m,
        theta_rate_rad_per_s: (b.peak_theta_rad - a.peak_theta_rad) / dt,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeCut {
    pub theta_index: usize,
    /// Angle of the extracted column (nearest to the requested one).
    pub theta_rad: f64,
    pub ranges_m: Vec<f64>,
    pub values: Vec<f64>,
}

/// Magnitude versus range along the grid column nearest `theta_rad`.
pub fn range_cut(raster: &RasterGrid, theta_rad: f64) -> Result<RangeCut> {
    let spec = &raster.spec;
    if !(theta_rad >= spec.theta_min_rad && theta_rad <= spec.theta_max_rad) {
        return Err(Error::AngleOutOfGrid { theta_rad });
    }
    let j = (((theta_rad - spec.theta_min_rad) / spec.theta_step()).round() as usize)
        .min(spec.n_theta - 1);
    Ok(RangeCut {
        theta_index: j,
        theta_rad: spec.theta_at(j),
        ranges_m: spec.ranges(),
        values: raster.column(j),
    })
}
