//! Raster export: CSV and binary PGM, written atomically.
//!
//! Both formats are byte-stable for identical rasters: fixed row order
//! (range outer, angle inner), fixed float formatting, LF line endings.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::analysis::RasterGrid;
use crate::beampattern::to_db;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CsvScale {
    Linear,
    /// dB relative to the raster peak, clamped at `floor_db`.
    Db {
        floor_db: f64,
    },
}

/// Nine significant digits in scientific notation.
pub fn format_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn csv_string(raster: &RasterGrid, scale: CsvScale) -> Result<String> {
    let peak = raster.max_value();
    let spec = &raster.spec;
    let thetas_deg: Vec<String> = spec
        .thetas()
        .iter()
        .map(|t| format_sig9(t.to_degrees()))
        .collect();
    let mut out = String::with_capacity(raster.values().len() * 48 + 32);
    out.push_str("range_m,angle_deg,value\n");
    for i in 0..raster.n_range() {
        let r = format_sig9(spec.range_at(i));
        for (j, theta) in thetas_deg.iter().enumerate() {
            let v = raster.get(i, j);
            let v = match scale {
                CsvScale::Linear => v,
                CsvScale::Db { floor_db } if peak > 0.0 => to_db(v, peak, floor_db)?,
                CsvScale::Db { floor_db } => floor_db,
            };
            let _ = writeln!(out, "{r},{theta},{}", format_sig9(v));
        }
    }
    Ok(out)
}

pub fn export_csv(raster: &RasterGrid, scale: CsvScale, path: &Path) -> Result<()> {
    write_atomic(path, csv_string(raster, scale)?.as_bytes())
}

/// Result of an image export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageOutcome {
    /// The raster was all zero and the image is uniformly at the floor.
    pub all_zero: bool,
}

/// Binary PGM bytes: width `n_theta`, height `n_range`, top row at `r_max`.
pub fn pgm_bytes(raster: &RasterGrid, db_floor: f64) -> Result<(Vec<u8>, ImageOutcome)> {
    if !(db_floor < 0.0) {
        return Err(crate::error::invalid("db_floor", "must be < 0"));
    }
    let spec = &raster.spec;
    let peak = raster.max_value();
    let all_zero = !(peak > 0.0);
    let header = format!(
        "P5\n# fdasim range_m={},{} theta_deg={},{} t_s={} mode={} fingerprint={} db_floor={} orientation=range_up\n{} {}\n255\n",
        format_sig9(spec.r_min_m),
        format_sig9(spec.r_max_m),
        format_sig9(spec.theta_min_rad.to_degrees()),
        format_sig9(spec.theta_max_rad.to_degrees()),
        format_sig9(spec.t_s),
        raster.mode,
        raster.fingerprint,
        format_sig9(db_floor),
        raster.n_theta(),
        raster.n_range(),
    );
    let mut bytes = header.into_bytes();
    bytes.reserve(raster.values().len());
    for i in (0..raster.n_range()).rev() {
        for &v in raster.row(i) {
            let px = if all_zero {
                0
            } else {
                let db = to_db(v, peak, db_floor)?;
                (255.0 * (db - db_floor) / -db_floor)
                    .round()
                    .clamp(0.0, 255.0) as u8
            };
            bytes.push(px);
        }
    }
    Ok((bytes, ImageOutcome { all_zero }))
}

pub fn export_image(raster: &RasterGrid, db_floor: f64, path: &Path) -> Result<ImageOutcome> {
    let (bytes, outcome) = pgm_bytes(raster, db_floor)?;
    if outcome.all_zero {
        log::warn!(
            "raster is all zero; {} is uniformly at the floor",
            path.display()
        );
    }
    write_atomic(path, &bytes)?;
    Ok(outcome)
}

/// Writes to a temporary file beside `path`, then renames over it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.flush().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{GridSpec, PatternMode};

    fn grid2x2() -> GridSpec {
        GridSpec {
            r_min_m: 1e3,
            r_max_m: 2e3,
            n_range: 2,
            theta_min_rad: -0.5,
            theta_max_rad: 0.5,
            n_theta: 2,
            t_s: 0.0,
        }
    }

    #[test]
    fn sig9_format() {
        assert_eq!(format_sig9(300000.0), "3.00000000e5");
        assert_eq!(format_sig9(-60.0), "-6.00000000e1");
        assert_eq!(format_sig9(0.0), "0.00000000e0");
        assert_eq!(format_sig9(1.0 / 3.0), "3.33333333e-1");
    }

    #[test]
    fn csv_layout() {
        let r = RasterGrid::from_values(
            grid2x2(),
            PatternMode::Cw,
            "x".into(),
            vec![1.0, 0.5, 0.25, 0.0],
        )
        .unwrap();
        let s = csv_string(&r, CsvScale::Linear).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "range_m,angle_deg,value");
        assert_eq!(lines[1], "1.00000000e3,-2.86478898e1,1.00000000e0");
        assert_eq!(lines[4], "2.00000000e3,2.86478898e1,0.00000000e0");
        assert!(!s.contains('\r'));

        let db = csv_string(&r, CsvScale::Db { floor_db: -60.0 }).unwrap();
        let last: Vec<&str> = db.lines().collect();
        assert!(last[2].ends_with(",-6.02059991e0"));
        assert!(last[4].ends_with(",-6.00000000e1"));
    }

    #[test]
    fn pgm_uniform_and_zero() {
        let r =
            RasterGrid::from_values(grid2x2(), PatternMode::Cw, "x".into(), vec![2.0; 4]).unwrap();
        let (bytes, outcome) = pgm_bytes(&r, -60.0).unwrap();
        assert!(!outcome.all_zero);
        assert!(bytes.starts_with(b"P5\n# fdasim "));
        assert!(bytes.ends_with(&[255, 255, 255, 255]));
        let text = String::from_utf8_lossy(&bytes);
        assert!(text.contains("\n2 2\n255\n"));

        let z =
            RasterGrid::from_values(grid2x2(), PatternMode::Cw, "x".into(), vec![0.0; 4]).unwrap();
        let (bytes, outcome) = pgm_bytes(&z, -60.0).unwrap();
        assert!(outcome.all_zero);
        assert!(bytes.ends_with(&[0, 0, 0, 0]));
    }

    #[test]
    fn pgm_top_row_is_max_range() {
        // row 0 (r_min) bright, row 1 (r_max) dark: the dark row is written first
        let r = RasterGrid::from_values(
            grid2x2(),
            PatternMode::Cw,
            "x".into(),
            vec![1.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        let (bytes, _) = pgm_bytes(&r, -60.0).unwrap();
        assert_eq!(&bytes[bytes.len() - 4..], &[0, 0, 255, 255]);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        let bad = dir.path().join("missing").join("x.txt");
        assert!(matches!(write_atomic(&bad, b"x"), Err(Error::Io { .. })));
    }
}
