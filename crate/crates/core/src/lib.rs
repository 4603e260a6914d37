//! Array-factor simulation for linear frequency diverse arrays (FDAs) and
//! pulsed phased arrays.
//!
//! The approximate FDA array factor depends on time and range only through
//! `t - r/c`, so its focus moves outward at the wave speed, and at any instant
//! it equals the array factor of a phased array with suitably shifted phases.
//! A phased array driven by a short pulse produces the same kind of moving
//! range-angle "dot" with no range sidelobes. This crate evaluates those
//! patterns, checks the identities numerically and exports range-angle
//! rasters.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod array;
pub mod beampattern;
pub mod checks;
pub mod config;
pub mod error;
pub mod export;
pub mod waveform;

pub use analysis::{
    drift_estimate, evaluate_raster, find_focus, range_cut, DriftEstimate, FocusReport, GridSpec,
    PatternMode, RangeCut, RasterGrid,
};
pub use array::{
    chebyshev_offsets, chebyshev_taper, check_validity, make_fda_linear, make_phased_array,
    ArrayConfig, PropagationEnv, ValidityReport,
};
pub use beampattern::{
    af_approx, af_exact, equivalent_phases, pulsed_pattern, received_signal, to_db, FieldPoint,
};
pub use error::{Error, Result};
pub use waveform::{envelope, fwhm, PulseSpec};

pub use num_complex::Complex64;
