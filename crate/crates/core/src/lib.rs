//! Accelerated destructive degradation test (ADDT) analysis.
//!
//! Three estimators of the thermal index (TI):
//!
//! * [`tradls`]: per-temperature polynomial interpolation followed by an
//!   Arrhenius regression of the interpolated failure times.
//! * [`mlfit`]: a sigmoidal degradation path with equicorrelated normal errors
//!   fitted by maximum likelihood, with delta-method intervals.
//! * [`semifit`]: a monotone cubic B-spline baseline on an Arrhenius-scaled
//!   time axis, fitted by profiling the acceleration parameter.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arrhenius;
pub mod cli;
pub mod covariance;
pub mod dataset;
pub mod error;
pub mod fixtures;
pub mod mlfit;
pub mod numopt;
pub mod report;
pub mod semifit;
pub mod tradls;

pub use arrhenius::{
    fit_line, inv_kelvin, semi_transform, ti_from_line, ArrheniusLine, ConfidenceInterval,
    TIEstimate,
};
pub use dataset::{DegradationDataset, InitialValue, Observation, Subset};
pub use error::{AddtError, Result};
pub use mlfit::{fit_ml, MLFit, MLParams, MlOptions};
pub use semifit::{fit_semi, SemiFit, SemiOptions};
pub use tradls::{fit_ls, LSFit, LsOptions};
