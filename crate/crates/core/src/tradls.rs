//! Traditional two-step method: a polynomial per temperature level, the time
//! at which each reaches the failure threshold, then an Arrhenius line
//! through those times.

use serde::{Deserialize, Serialize};

use crate::arrhenius::{fit_line, ti_from_line, ArrheniusLine, TIEstimate, DEFAULT_TARGET_TIME_H};
use crate::dataset::DegradationDataset;
use crate::error::{AddtError, Result};
use crate::numopt::{bisect, polyfit, polyval};

/// Root search extends this many times past the last observed time.
pub const EXTRAPOLATION_FACTOR: f64 = 10.0;
const SCAN_STEPS_PER_TMAX: f64 = 1e4;

/// Cubic (or lower) fit of mean response against time at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyFit {
    pub temp_c: f64,
    /// `a0 + a1 t + a2 t^2 + a3 t^3`; unused higher terms are zero.
    pub coeffs: [f64; 4],
    pub degree: usize,
    /// Largest time used in the fit.
    pub t_max: f64,
}

impl PolyFit {
    pub fn eval(&self, t: f64) -> f64 {
        polyval(&self.coeffs, t)
    }
}

/// Failure time at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureTime {
    pub temp_c: f64,
    pub time_h: f64,
    /// The crossing lies past the last observed time.
    pub extrapolated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LSFit {
    pub polyfits: Vec<PolyFit>,
    pub failure_times: Vec<FailureTime>,
    /// Levels whose polynomial never reached the threshold.
    pub excluded_levels: Vec<f64>,
    pub line: ArrheniusLine,
    pub ti: TIEstimate,
    pub threshold_pct: f64,
    pub initial_value: f64,
    pub y_f: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsOptions {
    pub threshold_pct: f64,
    pub target_time_h: f64,
    pub initial_value: Option<f64>,
}

impl Default for LsOptions {
    fn default() -> Self {
        Self {
            threshold_pct: 70.0,
            target_time_h: DEFAULT_TARGET_TIME_H,
            initial_value: None,
        }
    }
}

/// Fits each level's cell means, with the time-0 mean shared by every level.
/// Levels with fewer than two distinct times are skipped and reported in the
/// returned warnings.
pub fn fit_polynomials(ds: &DegradationDataset) -> Result<(Vec<PolyFit>, Vec<String>)> {
    let obs = ds.observations();
    let zero = ds.time_zero_responses();
    let zero_mean = (!zero.is_empty()).then(|| zero.iter().sum::<f64>() / zero.len() as f64);

    let mut fits = Vec::new();
    let mut warnings = Vec::new();
    for level in ds.stressed_levels() {
        let mut t = Vec::new();
        let mut y = Vec::new();
        if let Some(m) = zero_mean {
            t.push(0.0);
            y.push(m);
        }
        for cell in ds.cells() {
            if cell.temp_c == level && cell.time_h > 0.0 {
                t.push(cell.time_h);
                y.push(cell.rows.iter().map(|&r| obs[r].response).sum::<f64>() / cell.len() as f64);
            }
        }
        if t.len() < 2 {
            warnings.push(format!(
                "level {level} °C has fewer than two distinct time points and was dropped"
            ));
            continue;
        }
        let degree = (t.len() - 1).min(3);
        let c = polyfit(&t, &y, degree)?;
        let mut coeffs = [0.0; 4];
        coeffs[..c.len()].copy_from_slice(&c);
        fits.push(PolyFit {
            temp_c: level,
            coeffs,
            degree,
            t_max: t.iter().fold(0.0, |a: f64, b| a.max(*b)),
        });
    }
    if fits.is_empty() {
        return Err(AddtError::TooFewLevels(0));
    }
    Ok((fits, warnings))
}

/// Smallest `t > 0` with `p(t) = y_f`, searched on `(0, 10 t_max]` with a
/// grid of spacing `t_max / 1e4` followed by bisection.
pub fn crossing_time(fit: &PolyFit, y_f: f64, t_max: f64) -> Result<FailureTime> {
    if !(t_max > 0.0) {
        return Err(AddtError::InvalidArgument(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let g = |t: f64| fit.eval(t) - y_f;
    let step = t_max / SCAN_STEPS_PER_TMAX;
    let steps = (EXTRAPOLATION_FACTOR * SCAN_STEPS_PER_TMAX) as usize;
    let mut prev_t = 0.0;
    let mut prev = g(0.0);
    for i in 1..=steps {
        let t = step * i as f64;
        let v = g(t);
        if v == 0.0 || (prev != 0.0 && v.signum() != prev.signum()) {
            let root = if v == 0.0 {
                t
            } else {
                bisect(g, prev_t, t, 1e-14)?
            };
            return Ok(FailureTime {
                temp_c: fit.temp_c,
                time_h: root,
                extrapolated: root > t_max,
            });
        }
        prev_t = t;
        prev = v;
    }
    Err(AddtError::NoCrossing {
        threshold: y_f,
        detail: format!(
            "level {} °C stays {} the threshold up to {} h",
            fit.temp_c,
            if prev > 0.0 { "above" } else { "below" },
            EXTRAPOLATION_FACTOR * t_max
        ),
    })
}

/// The full traditional analysis.
pub fn fit_ls(ds: &DegradationDataset, opts: &LsOptions) -> Result<LSFit> {
    if !(opts.threshold_pct > 0.0 && opts.threshold_pct < 100.0) {
        return Err(AddtError::InvalidArgument(format!(
            "failure threshold must be in (0, 100), got {}",
            opts.threshold_pct
        )));
    }
    let initial = ds.initial_value(opts.initial_value)?;
    let y_f = initial.threshold(opts.threshold_pct);
    let (polyfits, mut warnings) = fit_polynomials(ds)?;

    let mut failure_times = Vec::new();
    let mut excluded_levels = Vec::new();
    for fit in &polyfits {
        match crossing_time(fit, y_f, fit.t_max) {
            Ok(ft) => {
                if ft.extrapolated {
                    warnings.push(format!(
                        "level {} °C reaches the threshold only by extrapolation ({:.4} h)",
                        ft.temp_c, ft.time_h
                    ));
                }
                failure_times.push(ft);
            }
            Err(AddtError::NoCrossing { .. }) => {
                warnings.push(format!(
                    "level {} °C never reaches the threshold {:.4}; excluded from the line",
                    fit.temp_c, y_f
                ));
                excluded_levels.push(fit.temp_c);
            }
            Err(e) => return Err(e),
        }
    }
    if failure_times.len() < 2 {
        return Err(AddtError::NoCrossing {
            threshold: y_f,
            detail: format!(
                "only {} level(s) reach the threshold; try a different failure threshold",
                failure_times.len()
            ),
        });
    }
    let points: Vec<(f64, f64)> = failure_times.iter().map(|f| (f.temp_c, f.time_h)).collect();
    let line = fit_line(&points)?;
    if !line.is_physical() {
        warnings.push(format!("non-positive Arrhenius slope {:.4}", line.beta1));
    }
    let ti = ti_from_line(&line, opts.target_time_h)?;
    Ok(LSFit {
        polyfits,
        failure_times,
        excluded_levels,
        line,
        ti,
        threshold_pct: opts.threshold_pct,
        initial_value: initial.value(),
        y_f,
        warnings,
    })
}
