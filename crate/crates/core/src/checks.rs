//! Randomized property suite run by `fdasim check`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::analysis::{evaluate_raster, find_focus, GridSpec, PatternMode};
use crate::array::{chebyshev_taper, make_phased_array, ArrayConfig, PropagationEnv};
use crate::beampattern::{
    af_approx, af_exact, equivalent_phased_array, exact_approx_bound, pulsed_pattern, FieldPoint,
};
use crate::waveform::PulseSpec;

/// Relative tolerance for identities that hold exactly in real arithmetic.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} ({})", self.name, self.detail)
    }
}

fn result(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

struct Gen {
    rng: StdRng,
}

impl Gen {
    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..=hi)
    }

    fn config(&mut self, with_offsets: bool) -> ArrayConfig {
        let n = self.rng.random_range(1..=24usize);
        let weights = (0..n).map(|_| self.range(0.05, 1.0)).collect();
        let phases = (0..n).map(|_| self.range(-PI, PI)).collect();
        let offsets = (0..n)
            .map(|_| {
                if with_offsets {
                    self.range(-10e3, 10e3)
                } else {
                    0.0
                }
            })
            .collect();
        ArrayConfig::new(
            n,
            self.range(0.005, 0.05),
            self.range(1e9, 20e9),
            weights,
            phases,
            offsets,
        )
        .expect("generated config is valid")
    }

    fn point(&mut self) -> FieldPoint {
        FieldPoint::new(
            self.range(-5e-3, 5e-3),
            self.range(1e3, 5e5),
            self.range(-FRAC_PI_2, FRAC_PI_2),
        )
        .expect("generated point is valid")
    }
}

/// Peak sidelobe level in dB of a half-wavelength-spaced CW pattern, from
/// a uniform scan of `n_scan` angles over [-90, 90] degrees.
pub fn peak_sidelobe_db(weights: &[f64], n_scan: usize) -> f64 {
    let mags: Vec<f64> = (0..n_scan)
        .map(|k| {
            let theta = -FRAC_PI_2 + PI * k as f64 / (n_scan - 1) as f64;
            let psi = PI * theta.sin();
            weights
                .iter()
                .enumerate()
                .map(|(n, w)| Complex64::from_polar(*w, n as f64 * psi))
                .sum::<Complex64>()
                .norm()
        })
        .collect();
    let (peak_idx, peak) =
        mags.iter()
            .enumerate()
            .fold((0, 0.0), |b, (i, v)| if *v > b.1 { (i, *v) } else { b });
    let mut hi = peak_idx;
    while hi + 1 < n_scan && mags[hi + 1] <= mags[hi] {
        hi += 1;
    }
    let mut lo = peak_idx;
    while lo > 0 && mags[lo - 1] <= mags[lo] {
        lo -= 1;
    }
    let side = mags[..lo]
        .iter()
        .chain(&mags[hi + 1..])
        .cloned()
        .fold(0.0, f64::max);
    20.0 * (side / peak).log10()
}

/// Runs every property with `trials` randomized cases where applicable.
pub fn run_checks(seed: u64, trials: usize) -> Vec<CheckResult> {
    let mut g = Gen {
        rng: StdRng::seed_from_u64(seed),
    };
    let env = PropagationEnv::default();
    let c = env.wave_speed();
    let mut out = Vec::new();

    // t - r/c translation of the approximate AF
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let cfg = g.config(true);
        let p = g.point();
        let dt = g.range(-0.9 * p.r_m / c, 2e-3);
        let q = FieldPoint::new(p.t_s + dt, p.r_m + c * dt, p.theta_rad).unwrap();
        let err = (af_approx(&cfg, &env, &q) - af_approx(&cfg, &env, &p)).norm() / cfg.weight_sum();
        worst = worst.max(err);
    }
    out.push(result(
        "translation_identity",
        worst <= IDENTITY_TOL,
        format!("{trials} trials, max rel err {worst:.3e}"),
    ));

    let mut worst = 0.0f64;
    for _ in 0..trials {
        let cfg = g.config(false);
        let p = g.point();
        let q = FieldPoint::new(g.range(-5e-3, 5e-3), g.range(1e3, 5e5), p.theta_rad).unwrap();
        let e1 = (af_approx(&cfg, &env, &p) - af_approx(&cfg, &env, &q)).norm();
        let e2 = (af_exact(&cfg, &env, &p) - af_exact(&cfg, &env, &q)).norm();
        worst = worst.max(e1.max(e2) / cfg.weight_sum());
    }
    out.push(result(
        "zero_offset_invariance",
        worst <= IDENTITY_TOL,
        format!("{trials} trials, max rel err {worst:.3e}"),
    ));

    let mut worst = 0.0f64;
    for _ in 0..trials {
        let cfg = g.config(true);
        let p = g.point();
        let pa = equivalent_phased_array(&cfg, &env, p.t_s, p.r_m);
        let q = FieldPoint::new(g.range(-1.0, 1.0), g.range(1.0, 1e6), p.theta_rad).unwrap();
        let err = (af_approx(&cfg, &env, &p) - af_approx(&pa, &env, &q)).norm() / cfg.weight_sum();
        worst = worst.max(err);
    }
    out.push(result(
        "equivalence_identity",
        worst <= IDENTITY_TOL,
        format!("{trials} trials, max rel err {worst:.3e}"),
    ));

    let mut violations = 0;
    for _ in 0..trials {
        let cfg = g.config(true);
        let p = g.point();
        let diff = (af_exact(&cfg, &env, &p) - af_approx(&cfg, &env, &p)).norm();
        // slack covers rounding of phases of order 1e3 rad
        if diff > exact_approx_bound(&cfg, &env) + 1e-12 * cfg.weight_sum() {
            violations += 1;
        }
    }
    out.push(result(
        "exact_approx_bound",
        violations == 0,
        format!("{trials} trials, {violations} violations"),
    ));

    let mut ok = true;
    for _ in 0..trials {
        let cfg = g.config(true);
        let p = g.point();
        let sum = cfg.weight_sum();
        ok &= af_approx(&cfg, &env, &p).norm() <= sum * (1.0 + 1e-12);
        ok &= af_exact(&cfg, &env, &p).norm() <= sum * (1.0 + 1e-12);
        let zero = cfg.to_phased_array(vec![0.0; cfg.n_elements()]).unwrap();
        let r = g.range(1e3, 5e5);
        let broadside = FieldPoint::new(r / c, r, 0.0).unwrap();
        ok &= (af_approx(&zero, &env, &broadside).norm() - sum).abs() <= 1e-12 * sum;
    }
    out.push(result("triangle_bound", ok, format!("{trials} trials")));

    let mut worst = 0.0f64;
    for _ in 0..trials {
        let n = g.rng.random_range(1..=24usize);
        let half: Vec<f64> = (0..n.div_ceil(2)).map(|_| g.range(0.05, 1.0)).collect();
        let weights: Vec<f64> = (0..n).map(|i| half[i.min(n - 1 - i)]).collect();
        let cfg = make_phased_array(
            n,
            g.range(0.005, 0.05),
            g.range(1e9, 20e9),
            weights,
            vec![0.0; n],
        )
        .unwrap();
        let p = g.point();
        let m = FieldPoint::new(p.t_s, p.r_m, -p.theta_rad).unwrap();
        let a = af_approx(&cfg, &env, &p).norm();
        let b = af_approx(&cfg, &env, &m).norm();
        worst = worst.max((a - b).abs() / cfg.weight_sum());
    }
    out.push(result(
        "symmetric_parity",
        worst <= IDENTITY_TOL,
        format!("{trials} trials, max rel err {worst:.3e}"),
    ));

    let mut ok = true;
    for _ in 0..trials.min(200) {
        let cfg = g.config(false);
        let pulse = PulseSpec::gaussian(g.range(-2e-3, 0.0), g.range(0.05e-3, 0.3e-3)).unwrap();
        let t = g.range(-1e-3, 1e-3);
        let (th1, th2) = (g.range(-1.5, 1.5), g.range(-1.5, 1.5));
        let r_ref = g.range(1e3, 5e5);
        let ref1 = pulsed_pattern(&cfg, &env, &pulse, &FieldPoint::new(t, r_ref, th1).unwrap())
            .unwrap()
            .norm();
        let ref2 = pulsed_pattern(&cfg, &env, &pulse, &FieldPoint::new(t, r_ref, th2).unwrap())
            .unwrap()
            .norm();
        for _ in 0..8 {
            let r = g.range(1e3, 5e5);
            let a = pulsed_pattern(&cfg, &env, &pulse, &FieldPoint::new(t, r, th1).unwrap())
                .unwrap()
                .norm();
            let b = pulsed_pattern(&cfg, &env, &pulse, &FieldPoint::new(t, r, th2).unwrap())
                .unwrap()
                .norm();
            // a / ref1 == b / ref2, cross-multiplied; every product is <= (sum w)^2
            ok &= (a * ref2 - b * ref1).abs() <= IDENTITY_TOL * cfg.weight_sum().powi(2);
        }
    }
    out.push(result(
        "pulsed_separability",
        ok,
        "range profiles proportional across angles".into(),
    ));

    let cheb = make_phased_array(
        15,
        0.015,
        10e9,
        chebyshev_taper(15, 30.0).unwrap(),
        vec![0.0; 15],
    )
    .unwrap();
    let small = GridSpec {
        n_range: 96,
        n_theta: 97,
        ..GridSpec::default()
    };

    let fda = g.config(true);
    let a = evaluate_raster(&fda, &env, None, PatternMode::FdaApprox, &small).unwrap();
    let b = evaluate_raster(&fda, &env, None, PatternMode::FdaApprox, &small).unwrap();
    out.push(result(
        "raster_determinism",
        a.values() == b.values(),
        "bit-identical repeat".into(),
    ));

    let mut worst = 0.0f64;
    for (cfg, pulse, mode) in [
        (&fda, None, PatternMode::FdaApprox),
        (
            &cheb,
            Some(PulseSpec::rect(-1e-3, 0.27e-3).unwrap()),
            PatternMode::Pulsed,
        ),
        (
            &cheb,
            Some(PulseSpec::gaussian(-1e-3, 0.15e-3).unwrap()),
            PatternMode::Pulsed,
        ),
    ] {
        let dt = g.range(1e-5, 1e-3);
        let a = evaluate_raster(cfg, &env, pulse.as_ref(), mode, &small).unwrap();
        let b = evaluate_raster(cfg, &env, pulse.as_ref(), mode, &small.translated(dt, c)).unwrap();
        // Rect edges are discontinuous; compare only where both sides agree on support
        let peak = a.max_value().max(f64::MIN_POSITIVE);
        for (x, y) in a.values().iter().zip(b.values()) {
            if matches!(pulse, Some(PulseSpec::Rect { .. })) && ((*x == 0.0) != (*y == 0.0)) {
                continue;
            }
            worst = worst.max((x - y).abs() / peak);
        }
    }
    out.push(result(
        "raster_translation",
        worst <= IDENTITY_TOL,
        format!("max rel err {worst:.3e}"),
    ));

    let cw = evaluate_raster(&cheb, &env, None, PatternMode::Cw, &small).unwrap();
    let flat = (0..cw.n_range()).all(|i| cw.row(i) == cw.row(0));
    out.push(result(
        "cw_range_invariance",
        flat,
        "every range row identical".into(),
    ));

    let mut ok = true;
    for raster in [&a, &cw] {
        let f = find_focus(raster).unwrap();
        let max = raster.values().iter().cloned().fold(0.0, f64::max);
        let first = raster.values().iter().position(|v| *v == max).unwrap();
        ok &= f.peak_mag == max
            && f.peak_range_index * raster.n_theta() + f.peak_theta_index == first;
    }
    out.push(result(
        "focus_is_global_max",
        ok,
        "matches linear scan".into(),
    ));

    let c3 = PropagationEnv::with_wave_speed(3e8).unwrap();
    let mut worst_cells = 0.0f64;
    for _ in 0..8 {
        let width = g.range(0.05e-3, 0.3e-3);
        let n_range = g.rng.random_range(128..=512usize);
        let grid = GridSpec {
            n_range,
            n_theta: 33,
            ..GridSpec::default()
        };
        let pulse = PulseSpec::rect(-1e-3, width).unwrap();
        let r = evaluate_raster(&cheb, &c3, Some(&pulse), PatternMode::Pulsed, &grid).unwrap();
        let f = find_focus(&r).unwrap();
        worst_cells = worst_cells.max((f.range_extent_m - 3e8 * width).abs() / grid.range_step());
    }
    out.push(result(
        "rect_range_extent",
        worst_cells <= 1.0,
        format!("max error {worst_cells:.3} cells"),
    ));

    let mut worst = 0.0f64;
    for n in [3usize, 5, 8, 15, 16, 31, 32] {
        for sll in [20.0, 30.0, 45.0, 60.0] {
            let w = chebyshev_taper(n, sll).unwrap();
            worst = worst.max((peak_sidelobe_db(&w, 4096) + sll).abs());
        }
    }
    out.push(result(
        "taper_sidelobe_level",
        worst <= 0.5,
        format!("max deviation {worst:.4} dB"),
    ));

    let mut ok = true;
    for _ in 0..trials {
        let p = PulseSpec::gaussian(g.range(-1.0, 1.0), g.range(1e-6, 1.0)).unwrap();
        let PulseSpec::Gaussian { center_s, .. } = p else {
            unreachable!()
        };
        let half = 0.5 * p.fwhm().unwrap();
        ok &= (p.envelope(center_s + half) - 0.5).abs() <= 1e-12;
        ok &= (p.envelope(center_s - half) - 0.5).abs() <= 1e-12;
        let t = g.range(-3.0, 3.0);
        let e = p.envelope(t);
        ok &= (0.0..=1.0).contains(&e);
    }
    out.push(result(
        "envelope_bounds_and_fwhm",
        ok,
        format!("{trials} trials"),
    ));

    out
}
