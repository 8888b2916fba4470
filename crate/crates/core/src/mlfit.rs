//! Parametric fit: mean path `alpha / (1 + (t / eta(x))^gamma)` with
//! `eta(x) = exp(nu0 + nu1 x)`, `x = 1 / (T + 273.16)`, and equicorrelated
//! normal errors within each (temperature, time) cell.

use std::f64::consts::LN_10;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::arrhenius::{
    inv_kelvin, ti_from_line, ArrheniusLine, ConfidenceInterval, TIEstimate, DEFAULT_TARGET_TIME_H,
};
use crate::covariance::{cs_loglik_cell, likelihood_groups};
use crate::dataset::DegradationDataset;
use crate::error::{AddtError, Result};
use crate::numopt::{
    fd_gradient, fd_hessian, nelder_mead, NelderMeadOptions, DEFAULT_GRADIENT_STEP,
    DEFAULT_HESSIAN_STEP,
};
use crate::tradls::{fit_ls, LsOptions};

pub const PARAM_NAMES: [&str; 6] = ["alpha", "nu0", "nu1", "gamma", "sigma", "rho"];

/// Below this the correlation is treated as sitting on its lower bound.
pub const RHO_BOUNDARY: f64 = 1e-4;
const RHO_START: f64 = 0.01;
const MAX_RESTARTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLParams {
    pub alpha: f64,
    pub nu0: f64,
    pub nu1: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub rho: f64,
}

impl MLParams {
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.alpha, self.nu0, self.nu1, self.gamma, self.sigma, self.rho,
        ]
    }

    /// `(ln alpha, nu0, nu1, ln gamma, ln sigma, logit rho)`.
    pub fn to_working(&self) -> [f64; 6] {
        [
            self.alpha.ln(),
            self.nu0,
            self.nu1,
            self.gamma.ln(),
            self.sigma.ln(),
            (self.rho / (1.0 - self.rho)).ln(),
        ]
    }

    pub fn from_working(w: &[f64]) -> Self {
        Self {
            alpha: w[0].exp(),
            nu0: w[1],
            nu1: w[2],
            gamma: w[3].exp(),
            sigma: w[4].exp(),
            rho: 1.0 / (1.0 + (-w[5]).exp()),
        }
    }

    fn check(&self) -> Result<()> {
        let ok = self.alpha > 0.0
            && self.gamma > 0.0
            && self.sigma > 0.0
            && (0.0..1.0).contains(&self.rho)
            && self.nu0.is_finite()
            && self.nu1.is_finite();
        if ok {
            Ok(())
        } else {
            Err(AddtError::InvalidArgument(format!(
                "invalid parameters {self:?}"
            )))
        }
    }
}

fn path(t: f64, x: f64, p: &MLParams) -> f64 {
    if t == 0.0 {
        return p.alpha;
    }
    let eta = (p.nu0 + p.nu1 * x).exp();
    p.alpha / (1.0 + (t / eta).powf(p.gamma))
}

/// Mean response at time `t` (hours) and temperature `temp_c`.
pub fn mean_path(t: f64, temp_c: f64, params: &MLParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(AddtError::InvalidArgument(format!(
            "time must be non-negative, got {t}"
        )));
    }
    Ok(path(t, inv_kelvin(temp_c)?, params))
}

/// Cells prepared for repeated likelihood evaluation.
#[derive(Debug, Clone)]
struct Cells {
    groups: Vec<(f64, f64, Vec<f64>)>,
}

impl Cells {
    fn new(ds: &DegradationDataset) -> Result<Self> {
        let obs = ds.observations();
        let mut groups = Vec::new();
        for rows in likelihood_groups(ds) {
            let first = obs[rows[0]];
            let x = inv_kelvin(first.temp_c)?;
            let ys = rows.iter().map(|&r| obs[r].response).collect();
            groups.push((first.time_h, x, ys));
        }
        Ok(Self { groups })
    }

    fn loglik(&self, p: &MLParams) -> f64 {
        let mut total = 0.0;
        let mut resid = Vec::new();
        for (t, x, ys) in &self.groups {
            let mu = path(*t, *x, p);
            resid.clear();
            resid.extend(ys.iter().map(|y| y - mu));
            total += cs_loglik_cell(&resid, p.sigma, p.rho);
        }
        total
    }
}

/// Log-likelihood of the dataset; all time-0 rows share one correlated cell.
pub fn loglik(ds: &DegradationDataset, params: &MLParams) -> Result<f64> {
    Ok(Cells::new(ds)?.loglik(params))
}

/// Arrhenius line implied by the path model at threshold `threshold_pct`.
pub fn line_from_params(params: &MLParams, threshold_pct: f64) -> ArrheniusLine {
    let p = threshold_pct / 100.0;
    ArrheniusLine::new(
        params.nu0 / LN_10 + ((1.0 - p) / p).ln() / (params.gamma * LN_10),
        params.nu1 / LN_10,
    )
}

/// Starting values from two least-squares fits at `thresholds`; warnings
/// report the fallback for an unusable shape estimate.
pub fn starting_values(
    ds: &DegradationDataset,
    thresholds: (f64, f64),
    initial_value: Option<f64>,
) -> Result<(MLParams, Vec<String>)> {
    let run = |pct| {
        fit_ls(
            ds,
            &LsOptions {
                threshold_pct: pct,
                target_time_h: DEFAULT_TARGET_TIME_H,
                initial_value,
            },
        )
    };
    let (a, b) = (run(thresholds.0)?, run(thresholds.1)?);
    let logit = |pct: f64| ((1.0 - pct / 100.0) / (pct / 100.0)).ln();
    let (l1, l2) = (logit(thresholds.0), logit(thresholds.1));
    // both lines evaluated at the mean stress
    let xs: Vec<f64> = ds
        .stressed_levels()
        .into_iter()
        .map(inv_kelvin)
        .collect::<Result<_>>()?;
    let x_mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let at_mean = |l: &ArrheniusLine| l.beta0 + l.beta1 * x_mean;
    let mut warnings = Vec::new();
    let mut gamma = (l1 - l2) / (LN_10 * (at_mean(&a.line) - at_mean(&b.line)));
    if !(gamma.is_finite() && gamma > 0.0) {
        warnings.push(format!(
            "thresholds {:?} give no usable shape start; using gamma = 1",
            thresholds
        ));
        gamma = 1.0;
    }
    let nu1 = LN_10 * 0.5 * (a.line.beta1 + b.line.beta1);
    let nu0 = LN_10 * at_mean(&a.line) - l1 / gamma - nu1 * x_mean;

    let obs = ds.observations();
    let (mut ss, mut df) = (0.0, 0usize);
    for cell in ds.cells() {
        let mean = cell.rows.iter().map(|&r| obs[r].response).sum::<f64>() / cell.len() as f64;
        ss += cell
            .rows
            .iter()
            .map(|&r| (obs[r].response - mean).powi(2))
            .sum::<f64>();
        df += cell.len() - 1;
    }
    let sigma = if df > 0 && ss > 0.0 {
        (ss / df as f64).sqrt()
    } else {
        1.0
    };

    Ok((
        MLParams {
            alpha: a.initial_value,
            nu0,
            nu1,
            gamma,
            sigma,
            rho: RHO_START,
        },
        warnings,
    ))
}

/// Standard normal quantile for a two-sided interval at `conf_level`.
pub fn two_sided_z(conf_level: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&conf_level) {
        return Err(AddtError::InvalidArgument(format!(
            "confidence level must be in [0, 1), got {conf_level}"
        )));
    }
    let n = Normal::standard();
    Ok(n.inverse_cdf(0.5 + conf_level / 2.0).max(0.0))
}

/// Critical value of the parameter table: the two-sided normal quantile
/// rounded to two decimals (1.96 at 95%).
pub fn table_z(conf_level: f64) -> Result<f64> {
    Ok((two_sided_z(conf_level)? * 100.0).round() / 100.0)
}

/// One row of the parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub name: String,
    pub estimate: f64,
    pub std: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// Wald interval: log scale for the positive parameters (alpha, gamma,
/// sigma), plain normal for the others.
pub fn param_interval(name: &str, estimate: f64, std: f64, z: f64) -> (f64, f64) {
    match name {
        "alpha" | "gamma" | "sigma" => {
            let f = (z * std / estimate).exp();
            (estimate / f, estimate * f)
        }
        _ => (estimate - z * std, estimate + z * std),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlOptions {
    pub threshold_pct: f64,
    pub target_time_h: f64,
    pub conf_level: f64,
    pub initial_value: Option<f64>,
    pub starts: Option<MLParams>,
    /// Threshold pair for least-squares starting values.
    pub start_thresholds: (f64, f64),
    pub max_iter: usize,
}

impl Default for MlOptions {
    fn default() -> Self {
        Self {
            threshold_pct: 70.0,
            target_time_h: DEFAULT_TARGET_TIME_H,
            conf_level: 0.95,
            initial_value: None,
            starts: None,
            start_thresholds: (70.0, 80.0),
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MLFit {
    pub params: MLParams,
    /// Covariance of `(alpha, nu0, nu1, gamma, sigma, rho)`, when available.
    pub cov: Option<Vec<Vec<f64>>>,
    pub loglik: f64,
    pub line: ArrheniusLine,
    pub ti: TIEstimate,
    pub conf_level: f64,
    pub threshold_pct: f64,
    pub summary: Vec<ParamSummary>,
    pub starts: MLParams,
    pub iterations: usize,
    /// Largest absolute log-likelihood gradient component (working scale).
    pub max_gradient: f64,
    pub rho_on_boundary: bool,
    pub warnings: Vec<String>,
}

impl MLFit {
    pub fn n_params(&self) -> usize {
        6
    }
}

/// Optimizer coordinates: the working scale with `nu0` centred at the mean
/// stress and `nu1` scaled by the stress spread.
struct Centring {
    x_mean: f64,
    x_scale: f64,
}

impl Centring {
    fn new(ds: &DegradationDataset) -> Result<Self> {
        let xs: Vec<f64> = ds
            .stressed_levels()
            .into_iter()
            .map(inv_kelvin)
            .collect::<Result<_>>()?;
        let n = xs.len() as f64;
        let x_mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - x_mean).powi(2)).sum::<f64>() / n;
        Ok(Self {
            x_mean,
            x_scale: var.sqrt().max(f64::MIN_POSITIVE),
        })
    }

    fn to_opt(&self, w: &[f64]) -> Vec<f64> {
        vec![
            w[0],
            w[1] + w[2] * self.x_mean,
            w[2] * self.x_scale,
            w[3],
            w[4],
            w[5],
        ]
    }

    fn to_working(&self, u: &[f64]) -> [f64; 6] {
        let nu1 = u[2] / self.x_scale;
        [u[0], u[1] - nu1 * self.x_mean, nu1, u[3], u[4], u[5]]
    }

    /// `d working / d u` restricted to the leading `free` coordinates.
    fn jacobian(&self, free: usize) -> DMatrix<f64> {
        let mut a = DMatrix::identity(free, free);
        a[(1, 2)] = -self.x_mean / self.x_scale;
        a[(2, 2)] = 1.0 / self.x_scale;
        a
    }
}

fn ti_of_working(w: &[f64], threshold_pct: f64, target_time_h: f64) -> f64 {
    let line = line_from_params(&MLParams::from_working(w), threshold_pct);
    ti_from_line(&line, target_time_h).map_or(f64::NAN, |t| t.ti_c)
}

/// Maximum-likelihood fit with Hessian-based standard errors.
pub fn fit_ml(ds: &DegradationDataset, opts: &MlOptions) -> Result<MLFit> {
    if !(opts.threshold_pct > 0.0 && opts.threshold_pct < 100.0) {
        return Err(AddtError::InvalidArgument(format!(
            "failure threshold must be in (0, 100), got {}",
            opts.threshold_pct
        )));
    }
    let z = two_sided_z(opts.conf_level)?;
    let table_z = table_z(opts.conf_level)?;
    let cells = Cells::new(ds)?;
    let mut warnings = Vec::new();
    let starts = match opts.starts {
        Some(s) => s,
        None => {
            let (s, w) = starting_values(ds, opts.start_thresholds, opts.initial_value)?;
            warnings.extend(w);
            s
        }
    };
    starts.check()?;
    let mut start_w = starts.to_working();
    if !start_w[5].is_finite() {
        start_w[5] = (RHO_START / (1.0 - RHO_START)).ln();
    }

    let centring = Centring::new(ds)?;
    let objective = |u: &[f64]| -cells.loglik(&MLParams::from_working(&centring.to_working(u)));
    let nm = NelderMeadOptions {
        initial_step: Some(vec![0.1; 6]),
        ..Default::default()
    };

    let mut u = centring.to_opt(&start_w);
    let mut best = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..MAX_RESTARTS {
        let opts_run = NelderMeadOptions {
            max_iter: opts.max_iter.saturating_sub(iterations).max(1),
            ..nm.clone()
        };
        let r = nelder_mead(objective, &u, &opts_run)?;
        iterations += r.iterations;
        let improved = best - r.value;
        u = r.point;
        best = r.value;
        converged = r.converged;
        if !r.converged || iterations >= opts.max_iter || improved.abs() < 1e-10 {
            break;
        }
    }
    if !converged {
        return Err(AddtError::NonConvergence {
            iterations,
            value: -best,
            point: MLParams::from_working(&centring.to_working(&u))
                .to_array()
                .to_vec(),
        });
    }

    let w = centring.to_working(&u);
    let params = MLParams::from_working(&w);
    let ll = -best;
    let line = line_from_params(&params, opts.threshold_pct);
    let mut ti = ti_from_line(&line, opts.target_time_h)?;

    let neg_ll = |v: &[f64]| -cells.loglik(&MLParams::from_working(v));
    let rho_on_boundary = params.rho < RHO_BOUNDARY;
    let free = if rho_on_boundary { 5 } else { 6 };
    if rho_on_boundary {
        warnings.push(format!(
            "correlation estimate {:.2e} is on the boundary 0; standard errors of the other parameters hold it fixed",
            params.rho
        ));
    }

    let grad = fd_gradient(neg_ll, &w[..], DEFAULT_GRADIENT_STEP)?;
    let max_gradient = grad[..free].iter().fold(0.0f64, |m, g| m.max(g.abs()));
    if max_gradient > 1e-3 {
        warnings.push(format!(
            "log-likelihood gradient {max_gradient:.2e} at the optimum exceeds 1e-3"
        ));
    }

    // Hessian in centred coordinates, mapped back linearly
    let sub_neg_ll = |v: &[f64]| {
        let mut full = u.clone();
        full[..free].copy_from_slice(v);
        objective(&full)
    };
    let working_cov = fd_hessian(sub_neg_ll, &u[..free], DEFAULT_HESSIAN_STEP)
        .ok()
        .and_then(|h| h.cholesky())
        .map(|c| {
            let a = centring.jacobian(free);
            &a * c.inverse() * a.transpose()
        });

    let jac = [
        params.alpha,
        1.0,
        1.0,
        params.gamma,
        params.sigma,
        params.rho * (1.0 - params.rho),
    ];
    let mut stds: [Option<f64>; 6] = [None; 6];
    let mut cov = None;
    match &working_cov {
        Some(v) => {
            let mut c = vec![vec![0.0; 6]; 6];
            for i in 0..free {
                for j in 0..free {
                    c[i][j] = jac[i] * jac[j] * v[(i, j)];
                }
                stds[i] = Some(c[i][i].sqrt());
            }
            if rho_on_boundary {
                // curvature along logit(rho) alone
                let h = fd_hessian(|r| neg_ll(&[w[0], w[1], w[2], w[3], w[4], r[0]]), &w[5..], DEFAULT_HESSIAN_STEP)
                    .ok()
                    .map(|m| m[(0, 0)])
                    .filter(|h| *h > 0.0);
                if let Some(h) = h {
                    c[5][5] = jac[5] * jac[5] / h;
                    stds[5] = Some(c[5][5].sqrt());
                }
            }
            cov = Some(c);

            let tg = fd_gradient(
                |v| ti_of_working(v, opts.threshold_pct, opts.target_time_h),
                &w[..],
                DEFAULT_GRADIENT_STEP,
            )?;
            let g = nalgebra::DVector::from_column_slice(&tg[..free]);
            let var = (g.transpose() * v * &g)[(0, 0)];
            if var >= 0.0 {
                let std = var.sqrt();
                ti.std = Some(std);
                ti.ci = Some(ConfidenceInterval {
                    lower: ti.ti_c - z * std,
                    upper: ti.ti_c + z * std,
                    level: opts.conf_level,
                });
            }
        }
        None => warnings.push(
            "Hessian of the log-likelihood is not positive definite; no standard errors or intervals".into(),
        ),
    }

    let summary = PARAM_NAMES
        .iter()
        .zip(params.to_array())
        .zip(stds)
        .map(|((name, est), std)| {
            let (lower, upper) = match std {
                Some(s) => {
                    let (l, u) = param_interval(name, est, s, table_z);
                    (Some(l), Some(u))
                }
                None => (None, None),
            };
            ParamSummary {
                name: name.to_string(),
                estimate: est,
                std,
                lower,
                upper,
            }
        })
        .collect();

    if !line.is_physical() {
        warnings.push(format!("non-positive Arrhenius slope {:.4}", line.beta1));
    }
    Ok(MLFit {
        params,
        cov,
        loglik: ll,
        line,
        ti,
        conf_level: opts.conf_level,
        threshold_pct: opts.threshold_pct,
        summary,
        starts,
        iterations,
        max_gradient,
        rho_on_boundary,
        warnings,
    })
}

/// TI interval at another confidence level, from the fit's delta-method std.
pub fn ti_confint(fit: &MLFit, conf_level: f64) -> Result<TIEstimate> {
    let std = fit.ti.std.ok_or(AddtError::MissingCovariance)?;
    let z = two_sided_z(conf_level)?;
    Ok(TIEstimate {
        ci: Some(ConfidenceInterval {
            lower: fit.ti.ti_c - z * std,
            upper: fit.ti.ti_c + z * std,
            level: conf_level,
        }),
        ..fit.ti
    })
}

/// Dense covariance matrix of the estimates as an nalgebra matrix.
pub fn cov_matrix(fit: &MLFit) -> Option<DMatrix<f64>> {
    fit.cov
        .as_ref()
        .map(|c| DMatrix::from_fn(6, 6, |i, j| c[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covariance::likelihood_groups;
    use crate::fixtures;
    use std::f64::consts::PI;

    const REFERENCE_ADHESIVE: MLParams = MLParams {
        alpha: 87.2004,
        nu0: -37.2360,
        nu1: 14913.1628,
        gamma: 0.7274,
        sigma: 8.2017,
        rho: 0.0,
    };

    #[test]
    fn path_endpoints() {
        let p = REFERENCE_ADHESIVE;
        assert_eq!(mean_path(0.0, 70.0, &p).unwrap(), p.alpha);
        let eta = (p.nu0 + p.nu1 * inv_kelvin(70.0).unwrap()).exp();
        assert!((mean_path(eta, 70.0, &p).unwrap() - p.alpha / 2.0).abs() < 1e-9);
        assert!(mean_path(336.0, 70.0, &p).unwrap() > mean_path(2016.0, 70.0, &p).unwrap());
        assert!(mean_path(-1.0, 70.0, &p).is_err());
    }

    #[test]
    fn adhesive_loglik_at_reference_estimates() {
        let ll = loglik(&fixtures::adhesive_bond_b(), &REFERENCE_ADHESIVE).unwrap();
        assert!((ll + 288.9057).abs() < 1e-3, "{ll}");
    }

    #[test]
    fn seal_loglik_at_reference_estimates() {
        let (ds, _) = fixtures::seal_strength().remap_time_zero();
        let p = MLParams {
            alpha: 30.5898,
            nu0: 0.2991,
            nu1: 3867.7170,
            gamma: 1.6556,
            sigma: 5.5456,
            rho: 0.7306,
        };
        let ll = loglik(&ds, &p).unwrap();
        assert!((ll + 555.0169).abs() < 1e-3, "{ll}");
    }

    #[test]
    fn independence_matches_per_observation_sum() {
        let ds = fixtures::adhesive_bond_b();
        let p = REFERENCE_ADHESIVE;
        let naive: f64 = ds
            .observations()
            .iter()
            .map(|o| {
                let e = o.response - mean_path(o.time_h, o.temp_c, &p).unwrap();
                -0.5 * (2.0 * PI * p.sigma * p.sigma).ln() - e * e / (2.0 * p.sigma * p.sigma)
            })
            .sum();
        assert!((loglik(&ds, &p).unwrap() - naive).abs() < 1e-10);
        assert!(likelihood_groups(&ds).len() == ds.cells().len());
    }

    #[test]
    fn line_at_half_threshold_is_scale_intercept() {
        let l = line_from_params(&REFERENCE_ADHESIVE, 50.0);
        assert_eq!(l.beta0, REFERENCE_ADHESIVE.nu0 / LN_10);
        assert_eq!(l.beta1, REFERENCE_ADHESIVE.nu1 / LN_10);
    }

    #[test]
    fn working_round_trip() {
        let p = MLParams {
            rho: 0.3,
            ..REFERENCE_ADHESIVE
        };
        let q = MLParams::from_working(&p.to_working());
        for (a, b) in p.to_array().iter().zip(q.to_array()) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn interval_forms() {
        // sigma row of the adhesive table: lognormal form
        let (l, u) = param_interval("sigma", 8.2017, 0.6405, 1.959964);
        assert!((l - 7.0377).abs() < 1e-3 && (u - 9.5581).abs() < 1e-3);
        let (l, u) = param_interval("nu0", -37.2360, 4.6450, 1.959964);
        assert!((l + 46.3400).abs() < 1e-3 && (u + 28.1320).abs() < 1e-3);
        let z = table_z(0.95).unwrap();
        assert_eq!(z, 1.96);
        let (l, u) = param_interval("nu1", 14913.1628, 1561.1425, z);
        assert!((l - 11853.3235).abs() < 1e-3 && (u - 17973.0022).abs() < 1e-3);
    }

    #[test]
    fn starting_values_land_near_the_estimates() {
        let (s, w) = starting_values(&fixtures::adhesive_bond_b(), (70.0, 80.0), None).unwrap();
        assert!(w.is_empty());
        assert!(s.gamma > 0.0 && s.sigma > 0.0);
        assert!((s.alpha - 86.075).abs() < 1e-9);
        let (_, w) = starting_values(&fixtures::adhesive_bond_b(), (70.0, 70.0), None).unwrap();
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn adhesive_fit() {
        let fit = fit_ml(&fixtures::adhesive_bond_b(), &MlOptions::default()).unwrap();
        assert!((fit.loglik + 288.9057).abs() < 0.01);
        assert!(fit.rho_on_boundary);
        assert!((fit.ti.ti_c - 25.6183).abs() < 0.05, "{}", fit.ti.ti_c);
        assert!((fit.ti.std.unwrap() - 3.0980).abs() < 0.05);
        let ci = ti_confint(&fit, 0.99).unwrap().ci.unwrap();
        assert!(
            (ci.lower - 17.638).abs() < 0.01 && (ci.upper - 33.598).abs() < 0.01,
            "{ci:?}"
        );
        let zero = ti_confint(&fit, 0.0).unwrap().ci.unwrap();
        assert_eq!(zero.lower, fit.ti.ti_c);
    }

    #[test]
    fn missing_covariance() {
        let mut fit = fit_ml(&fixtures::adhesive_bond_b(), &MlOptions::default()).unwrap();
        fit.ti.std = None;
        assert!(matches!(
            ti_confint(&fit, 0.9),
            Err(AddtError::MissingCovariance)
        ));
    }
}
