//! Small deterministic numerical kernel shared by the estimators.

mod bisect;
mod diff;
mod golden;
mod lsq;
mod monotone;
mod nelder_mead;

pub use bisect::bisect;
pub use diff::{fd_gradient, fd_hessian, DEFAULT_GRADIENT_STEP, DEFAULT_HESSIAN_STEP};
pub use golden::{golden_section_min, maximize_scalar};
pub use lsq::{least_squares, polyfit, polyval};
pub use monotone::{monotone_lsq, MonotoneFit};
pub use nelder_mead::{nelder_mead, NelderMeadOptions};

/// Outcome of an iterative minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best point after each iteration, when requested.
    pub trace: Option<Vec<Vec<f64>>>,
}
