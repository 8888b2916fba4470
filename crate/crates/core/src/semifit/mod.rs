//! Semiparametric fit: `y = g(t / exp(beta (x_max - x))) + e` with a
//! nonincreasing cubic B-spline `g`, `x = -11605 / (T + 273.16)`, and
//! optionally equicorrelated errors within cells. `beta` is profiled.

mod bspline;

use std::f64::consts::{LN_10, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bspline::SplineBasis;

use crate::arrhenius::{
    semi_transform, ti_from_line, ArrheniusLine, TIEstimate, DEFAULT_TARGET_TIME_H,
};
use crate::covariance::{likelihood_groups, whitening_coef};
use crate::dataset::DegradationDataset;
use crate::error::{AddtError, Result};
use crate::numopt::{bisect, maximize_scalar, monotone_lsq};

pub const DEFAULT_DEGREE: usize = 3;
/// Largest interior knot count tried by automatic placement.
pub const MAX_AUTO_KNOTS: usize = 7;
/// Parameter counts behind the compatibility AICc (`-2 loglik + 2k`).
pub const COMPAT_K_INDEPENDENT: usize = 5;
pub const COMPAT_K_CORRELATED: usize = 6;

const BETA_GRID: usize = 80;
const BETA_TOL: f64 = 1e-6;
const RHO_MAX: f64 = 0.99;
const RHO_GRID: usize = 12;
const RHO_TOL: f64 = 1e-7;

/// `t / exp(beta (x_max - x))` with `x = semi_transform(temp_c)`.
pub fn scale_time(t: f64, temp_c: f64, beta: f64, x_max: f64) -> Result<f64> {
    Ok(t / (beta * (x_max - semi_transform(temp_c)?)).exp())
}

/// Textbook small-sample AIC.
pub fn aicc(loglik: f64, k: usize, n_obs: usize) -> Result<f64> {
    if n_obs <= k + 1 {
        return Err(AddtError::InvalidArgument(format!(
            "AICc needs more than k + 1 = {} observations, got {n_obs}",
            k + 1
        )));
    }
    let k = k as f64;
    Ok(-2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1.0) / (n_obs as f64 - k - 1.0))
}

/// `-2 loglik + 2k`, the form the reference summaries print as AICc.
pub fn aicc_compat(loglik: f64, k: usize) -> f64 {
    -2.0 * loglik + 2.0 * k as f64
}

/// Type-7 sample quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum KnotRule {
    /// Fixed interior knots in scaled time.
    Pinned(Vec<f64>),
    /// `n` interior knots at quantiles `k / (n + 1)` of all scaled times.
    Quantiles(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemiOptions {
    pub threshold_pct: f64,
    pub target_time_h: f64,
    pub with_rho: bool,
    /// Explicit interior knots; automatic quantile placement when `None`.
    pub knots: Option<Vec<f64>>,
    pub degree: usize,
    /// Upper end of the acceleration search; defaults to `10 / max(x_max - x)`.
    pub beta_max: Option<f64>,
}

impl Default for SemiOptions {
    fn default() -> Self {
        Self {
            threshold_pct: 70.0,
            target_time_h: DEFAULT_TARGET_TIME_H,
            with_rho: false,
            knots: None,
            degree: DEFAULT_DEGREE,
            beta_max: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiParams {
    pub beta: f64,
    /// Nonincreasing spline coefficients.
    pub gamma_coeffs: Vec<f64>,
    pub sigma: f64,
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotCandidate {
    pub n_knots: usize,
    pub beta: Option<f64>,
    pub aicc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiFit {
    pub params: SemiParams,
    pub basis: SplineBasis,
    pub loglik: f64,
    pub n_obs: usize,
    /// Spline coefficients + beta + sigma (+ rho).
    pub n_params: usize,
    pub aicc: f64,
    pub aicc_compat: f64,
    pub line: ArrheniusLine,
    pub ti: TIEstimate,
    pub threshold_pct: f64,
    /// Absolute threshold, `threshold_pct / 100 * g(0)`.
    pub y_f: f64,
    /// Scaled time at which the baseline reaches `y_f`.
    pub failure_scaled_time: f64,
    pub x_max: f64,
    pub knots_pinned: bool,
    pub knot_selection: Vec<KnotCandidate>,
    pub kkt_residual: f64,
    pub warnings: Vec<String>,
}

impl SemiFit {
    /// Baseline path `g` at scaled time `eta` (clamped to the spline domain).
    pub fn baseline(&self, eta: f64) -> f64 {
        self.basis.value(&self.params.gamma_coeffs, eta)
    }

    pub fn scaled_time(&self, t: f64, temp_c: f64) -> Result<f64> {
        scale_time(t, temp_c, self.params.beta, self.x_max)
    }

    /// Fitted mean at time `t` and temperature `temp_c`.
    pub fn mean(&self, t: f64, temp_c: f64) -> Result<f64> {
        Ok(self.baseline(self.scaled_time(t, temp_c)?))
    }
}

/// Data arranged for repeated profile evaluations.
struct Problem {
    y: Vec<f64>,
    t: Vec<f64>,
    s: Vec<f64>,
    groups: Vec<Vec<usize>>,
    x_max: f64,
    degree: usize,
}

struct Inner {
    loglik: f64,
    basis: SplineBasis,
    coef: Vec<f64>,
    sigma: f64,
    rho: Option<f64>,
    kkt: f64,
}

impl Problem {
    fn new(ds: &DegradationDataset, degree: usize) -> Result<Self> {
        let x_max = ds
            .stressed_levels()
            .into_iter()
            .map(semi_transform)
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut s = Vec::with_capacity(ds.len());
        for o in ds.observations() {
            s.push(x_max - semi_transform(o.temp_c)?);
        }
        Ok(Self {
            y: ds.responses(),
            t: ds.observations().iter().map(|o| o.time_h).collect(),
            s,
            groups: likelihood_groups(ds),
            x_max,
            degree,
        })
    }

    fn n(&self) -> usize {
        self.y.len()
    }

    fn scaled(&self, beta: f64) -> Vec<f64> {
        self.t
            .iter()
            .zip(&self.s)
            .map(|(t, s)| t / (beta * s).exp())
            .collect()
    }

    fn basis(&self, z: &[f64], rule: &KnotRule) -> Result<SplineBasis> {
        let hi = z.iter().fold(0.0f64, |m, v| m.max(*v));
        let interior = match rule {
            KnotRule::Pinned(k) => k.clone(),
            KnotRule::Quantiles(n) => {
                let mut sorted = z.to_vec();
                sorted.sort_by(|a, b| a.total_cmp(b));
                (1..=*n)
                    .map(|k| quantile_sorted(&sorted, k as f64 / (*n + 1) as f64))
                    .collect()
            }
        };
        SplineBasis::clamped(self.degree, &interior, 0.0, hi)
    }

    /// Monotone fit at fixed `beta` and correlation.
    fn inner(&self, beta: f64, rule: &KnotRule, rho: Option<f64>) -> Result<Inner> {
        let z = self.scaled(beta);
        let basis = self.basis(&z, rule)?;
        let (mut design, _) = basis.design(&z);
        let mut y = self.y.clone();
        let n = self.n() as f64;
        let mut logdet = 0.0;
        if let Some(r) = rho {
            let p = design.ncols();
            for rows in &self.groups {
                let m = rows.len();
                let c = whitening_coef(m, r);
                let ybar = rows.iter().map(|&i| self.y[i]).sum::<f64>() / m as f64;
                for &i in rows {
                    y[i] -= c * ybar;
                }
                for j in 0..p {
                    let bbar = rows.iter().map(|&i| design[(i, j)]).sum::<f64>() / m as f64;
                    for &i in rows {
                        design[(i, j)] -= c * bbar;
                    }
                }
                logdet += (m as f64 - 1.0) * (1.0 - r).ln() + (1.0 + (m as f64 - 1.0) * r).ln();
            }
        }
        let fit = monotone_lsq(&design, &y, None)?;
        let quad = fit.rss / (1.0 - rho.unwrap_or(0.0));
        let sigma2 = quad / n;
        let loglik = -0.5 * (n * (2.0 * PI * sigma2).ln() + logdet + n);
        Ok(Inner {
            loglik,
            basis,
            coef: fit.coefficients,
            sigma: sigma2.sqrt(),
            rho,
            kkt: fit.kkt_residual,
        })
    }

    /// Inner fit with the correlation profiled out when requested.
    fn profile(&self, beta: f64, rule: &KnotRule, with_rho: bool) -> Result<Inner> {
        if !with_rho {
            return self.inner(beta, rule, None);
        }
        let (rho, _) = maximize_scalar(
            |r| {
                self.inner(beta, rule, Some(r))
                    .map_or(f64::NEG_INFINITY, |f| f.loglik)
            },
            0.0,
            RHO_MAX,
            RHO_GRID,
            RHO_TOL,
        );
        self.inner(beta, rule, Some(rho))
    }

    fn fit_beta(&self, rule: &KnotRule, with_rho: bool, beta_max: f64) -> Result<(f64, Inner)> {
        let (beta, ll) = maximize_scalar(
            |b| {
                self.profile(b, rule, with_rho)
                    .map_or(f64::NEG_INFINITY, |f| f.loglik)
            },
            0.0,
            beta_max,
            BETA_GRID,
            BETA_TOL,
        );
        if !ll.is_finite() {
            return Err(AddtError::NonConvergence {
                iterations: BETA_GRID,
                value: ll,
                point: vec![beta],
            });
        }
        Ok((beta, self.profile(beta, rule, with_rho)?))
    }
}

/// Scaled failure time, line and TI from a fitted baseline.
pub fn ti_semi(
    basis: &SplineBasis,
    coef: &[f64],
    beta: f64,
    x_max: f64,
    y_f: f64,
    target_time_h: f64,
) -> Result<(ArrheniusLine, TIEstimate, f64)> {
    let (lo, hi) = basis.domain();
    let g = |z: f64| basis.value(coef, z) - y_f;
    let t_star = bisect(g, lo, hi, 1e-13).map_err(|_| AddtError::NoCrossing {
        threshold: y_f,
        detail: format!(
            "the fitted baseline stays above {y_f:.4} on scaled times [{lo}, {hi:.4}]; try a higher failure threshold"
        ),
    })?;
    if !(t_star > 0.0) {
        return Err(AddtError::NoCrossing {
            threshold: y_f,
            detail: "the fitted baseline starts below the threshold".into(),
        });
    }
    let line = ArrheniusLine::new(
        t_star.log10() + beta * x_max / LN_10,
        crate::arrhenius::SEMI_SCALE * beta / LN_10,
    );
    let ti = ti_from_line(&line, target_time_h)?;
    Ok((line, ti, t_star))
}

/// Semiparametric fit with profiled acceleration parameter.
pub fn fit_semi(ds: &DegradationDataset, opts: &SemiOptions) -> Result<SemiFit> {
    if !(opts.threshold_pct > 0.0 && opts.threshold_pct < 100.0) {
        return Err(AddtError::InvalidArgument(format!(
            "failure threshold must be in (0, 100), got {}",
            opts.threshold_pct
        )));
    }
    let problem = Problem::new(ds, opts.degree)?;
    let s_max = problem.s.iter().fold(0.0f64, |m, v| m.max(*v));
    let beta_max = opts.beta_max.unwrap_or(10.0 / s_max.max(f64::MIN_POSITIVE));
    let mut warnings = Vec::new();

    let (rule, beta, inner, knot_selection) = match &opts.knots {
        Some(k) => {
            let t_max = ds.max_time();
            if let Some(bad) = k.iter().find(|&&v| !(v > 0.0 && v < t_max)) {
                return Err(AddtError::InvalidArgument(format!(
                    "knot {bad} outside the data range (0, {t_max})"
                )));
            }
            let mut k = k.clone();
            k.sort_by(|a, b| a.total_cmp(b));
            let rule = KnotRule::Pinned(k);
            let (beta, inner) = problem.fit_beta(&rule, opts.with_rho, beta_max)?;
            (rule, beta, inner, Vec::new())
        }
        None => {
            let fits: Vec<(usize, Result<(f64, Inner)>)> = (1..=MAX_AUTO_KNOTS)
                .into_par_iter()
                .map(|n| {
                    (
                        n,
                        problem.fit_beta(&KnotRule::Quantiles(n), opts.with_rho, beta_max),
                    )
                })
                .collect();
            let mut selection = Vec::new();
            let mut best: Option<(f64, usize, f64, Inner)> = None;
            for (n, r) in fits {
                let scored = r.ok().and_then(|(b, f)| {
                    let k = f.coef.len() + 2 + usize::from(opts.with_rho);
                    aicc(f.loglik, k, problem.n()).ok().map(|a| (a, b, f))
                });
                selection.push(KnotCandidate {
                    n_knots: n,
                    beta: scored.as_ref().map(|s| s.1),
                    aicc: scored.as_ref().map(|s| s.0),
                });
                if let Some((a, b, f)) = scored {
                    if best.as_ref().is_none_or(|cur| a < cur.0) {
                        best = Some((a, n, b, f));
                    }
                }
            }
            let (_, n, b, f) = best.ok_or_else(|| {
                AddtError::RankDeficient(
                    "no automatic knot count gave a usable spline design".into(),
                )
            })?;
            (KnotRule::Quantiles(n), b, f, selection)
        }
    };

    if beta_max - beta < 10.0 * BETA_TOL {
        warnings.push(format!(
            "acceleration estimate {beta:.6} sits on the search bound {beta_max:.6}"
        ));
    }
    if let Some(r) = inner.rho {
        if RHO_MAX - r < 10.0 * RHO_TOL {
            warnings.push(format!(
                "correlation estimate {r:.6} sits on the search bound {RHO_MAX}"
            ));
        }
    }

    let g0 = inner.coef[0];
    let y_f = opts.threshold_pct / 100.0 * g0;
    let (line, ti, t_star) = ti_semi(
        &inner.basis,
        &inner.coef,
        beta,
        problem.x_max,
        y_f,
        opts.target_time_h,
    )?;

    let n_params = inner.coef.len() + 2 + usize::from(opts.with_rho);
    let n_obs = problem.n();
    let compat_k = if opts.with_rho {
        COMPAT_K_CORRELATED
    } else {
        COMPAT_K_INDEPENDENT
    };
    Ok(SemiFit {
        params: SemiParams {
            beta,
            gamma_coeffs: inner.coef,
            sigma: inner.sigma,
            rho: inner.rho,
        },
        basis: inner.basis,
        loglik: inner.loglik,
        n_obs,
        n_params,
        aicc: aicc(inner.loglik, n_params, n_obs)?,
        aicc_compat: aicc_compat(inner.loglik, compat_k),
        line,
        ti,
        threshold_pct: opts.threshold_pct,
        y_f,
        failure_scaled_time: t_star,
        x_max: problem.x_max,
        knots_pinned: matches!(rule, KnotRule::Pinned(_)),
        knot_selection,
        kkt_residual: inner.kkt,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Observation;
    use crate::fixtures;

    fn adhesive_pinned() -> SemiFit {
        let opts = SemiOptions {
            knots: Some(vec![180.66]),
            ..Default::default()
        };
        fit_semi(&fixtures::adhesive_bond_b(), &opts).unwrap()
    }

    #[test]
    fn scaled_time_examples() {
        let x_max = semi_transform(70.0).unwrap();
        assert_eq!(scale_time(500.0, 70.0, 1.7, x_max).unwrap(), 500.0);
        assert_eq!(scale_time(500.0, 50.0, 0.0, x_max).unwrap(), 500.0);
        let want = 2688.0 / (1.329f64 * (-33.8180 - (-35.9110))).exp();
        let got = scale_time(2688.0, 50.0, 1.329, x_max).unwrap();
        assert!((got - want).abs() < 1e-3 * want);
    }

    #[test]
    fn aicc_forms() {
        assert!((aicc_compat(-639.206, 5) - 1288.412).abs() < 1e-9);
        assert!((aicc_compat(-552.662, 6) - 1117.324).abs() < 1e-9);
        assert_eq!(aicc(0.0, 0, 10).unwrap(), 0.0);
        assert!(aicc(-1.0, 5, 6).is_err());
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), 2.5);
        assert_eq!(quantile_sorted(&v, 1.0), 4.0);
        assert_eq!(quantile_sorted(&v, 0.0), 1.0);
    }

    #[test]
    fn adhesive_with_pinned_knot() {
        let fit = adhesive_pinned();
        assert_eq!(fit.basis.interior_knots(), &[180.66]);
        assert_eq!(fit.basis.domain(), (0.0, 2016.0));
        assert!(
            (fit.params.beta - 1.329).abs() < 0.01,
            "{}",
            fit.params.beta
        );
        assert!((fit.loglik + 288.135).abs() < 0.05, "{}", fit.loglik);
        assert!(fit.params.gamma_coeffs.windows(2).all(|w| w[0] >= w[1]));
        assert!(fit.kkt_residual <= 1e-8);
        let b1 = crate::arrhenius::SEMI_SCALE * fit.params.beta / LN_10;
        assert_eq!(fit.line.beta1, b1);
    }

    #[test]
    fn fitted_mean_is_nonincreasing() {
        let fit = adhesive_pinned();
        for temp in [50.0, 60.0, 70.0] {
            let mut prev = f64::INFINITY;
            for i in 0..1000 {
                let m = fit.mean(i as f64 * 3.0, temp).unwrap();
                assert!(m <= prev + 1e-12);
                prev = m;
            }
        }
    }

    #[test]
    fn ti_round_trip() {
        let fit = adhesive_pinned();
        let m = fit.mean(fit.ti.target_time_h, fit.ti.ti_c).unwrap();
        assert!((m - fit.y_f).abs() <= 1e-6 * fit.y_f, "{m} vs {}", fit.y_f);
    }

    #[test]
    fn knot_outside_data_is_rejected() {
        let opts = SemiOptions {
            knots: Some(vec![1e6]),
            ..Default::default()
        };
        assert!(fit_semi(&fixtures::adhesive_bond_b(), &opts).is_err());
    }

    #[test]
    fn automatic_knots_pick_a_count() {
        let fit = fit_semi(&fixtures::adhesive_bond_b(), &SemiOptions::default()).unwrap();
        assert!(!fit.knots_pinned);
        assert_eq!(fit.knot_selection.len(), MAX_AUTO_KNOTS);
        let chosen = fit.basis.interior_knots().len();
        let best = fit
            .knot_selection
            .iter()
            .filter_map(|c| c.aicc.map(|a| (a, c.n_knots)))
            .fold((f64::INFINITY, 0), |m, c| if c.0 < m.0 { c } else { m });
        assert_eq!(best.1, chosen);
    }

    #[test]
    fn recovers_acceleration_from_exact_data() {
        // baseline g(eta) = 100 - eta / 10 on the highest level's time axis
        let beta = 0.8;
        let temps = [60.0, 80.0, 100.0];
        let x_max = semi_transform(100.0).unwrap();
        let mut obs = vec![Observation::new(60.0, 0.0, 100.0); 4];
        for &temp in &temps {
            for t in [100.0, 200.0, 300.0, 400.0, 500.0] {
                let eta = scale_time(t, temp, beta, x_max).unwrap();
                for k in 0..3 {
                    obs.push(Observation::new(
                        temp,
                        t,
                        100.0 - eta / 10.0 + 0.01 * (k as f64 - 1.0),
                    ));
                }
            }
        }
        let ds = DegradationDataset::new(obs).unwrap();
        let opts = SemiOptions {
            knots: Some(vec![250.0]),
            ..Default::default()
        };
        let fit = fit_semi(&ds, &opts).unwrap();
        assert!((fit.params.beta - beta).abs() < 1e-3, "{}", fit.params.beta);
    }
}
