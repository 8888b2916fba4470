//! Closed forms for the equicorrelated (compound-symmetry) normal density
//! `N(mu, sigma^2 [(1 - rho) I + rho J])` used by the likelihood methods.

use std::f64::consts::PI;

use crate::dataset::DegradationDataset;

/// `log det(sigma^2 [(1 - rho) I + rho J])` for an `m`-variate cell.
pub fn cs_logdet(m: usize, sigma: f64, rho: f64) -> f64 {
    let m = m as f64;
    2.0 * m * sigma.ln() + (m - 1.0) * (1.0 - rho).ln() + (1.0 + (m - 1.0) * rho).ln()
}

/// `e^T Sigma^{-1} e` from `q = sum e^2` and `s = sum e`.
pub fn cs_quadratic(m: usize, q: f64, s: f64, sigma: f64, rho: f64) -> f64 {
    let m = m as f64;
    (q - rho / (1.0 + (m - 1.0) * rho) * s * s) / ((1.0 - rho) * sigma * sigma)
}

/// Whether `rho` gives a positive-definite correlation for an `m`-variate cell.
pub fn cs_valid(m: usize, rho: f64) -> bool {
    rho < 1.0 && 1.0 + (m as f64 - 1.0) * rho > 0.0
}

/// Log density of one cell's residual vector; `-inf` outside the valid region.
pub fn cs_loglik_cell(residuals: &[f64], sigma: f64, rho: f64) -> f64 {
    let m = residuals.len();
    if m == 0 {
        return 0.0;
    }
    if !(sigma > 0.0) || !cs_valid(m, rho) {
        return f64::NEG_INFINITY;
    }
    let (q, s) = residuals
        .iter()
        .fold((0.0, 0.0), |(q, s), e| (q + e * e, s + e));
    -0.5 * (m as f64 * (2.0 * PI).ln()
        + cs_logdet(m, sigma, rho)
        + cs_quadratic(m, q, s, sigma, rho))
}

/// Coefficient `c` such that `e - c * mean(e)` has squared norm
/// `(1 - rho) e^T R^{-1} e` with `R = (1 - rho) I + rho J`.
pub fn whitening_coef(m: usize, rho: f64) -> f64 {
    1.0 - ((1.0 - rho) / (1.0 + (m as f64 - 1.0) * rho)).sqrt()
}

/// Row groups sharing a common correlation: every (temperature, time > 0)
/// cell, plus a single group holding all time-0 rows.
pub fn likelihood_groups(ds: &DegradationDataset) -> Vec<Vec<usize>> {
    let mut zero = Vec::new();
    let mut groups = Vec::new();
    for cell in ds.cells() {
        if cell.time_h == 0.0 {
            zero.extend_from_slice(&cell.rows);
        } else {
            groups.push(cell.rows.clone());
        }
    }
    if !zero.is_empty() {
        zero.sort_unstable();
        groups.insert(0, zero);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    pub(crate) fn dense_loglik(e: &[f64], sigma: f64, rho: f64) -> f64 {
        let m = e.len();
        let cov = DMatrix::from_fn(m, m, |i, j| sigma * sigma * if i == j { 1.0 } else { rho });
        let chol = cov.cholesky().expect("positive definite");
        let logdet = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let ev = DVector::from_column_slice(e);
        let quad = ev.dot(&chol.solve(&ev));
        -0.5 * (m as f64 * (2.0 * PI).ln() + logdet + quad)
    }

    #[test]
    fn independent_case_is_sum_of_normals() {
        let e = [0.3, -1.2, 2.5, 0.0];
        let sigma = 1.7;
        let naive: f64 = e
            .iter()
            .map(|v| -0.5 * (2.0 * PI * sigma * sigma).ln() - v * v / (2.0 * sigma * sigma))
            .sum();
        assert!((cs_loglik_cell(&e, sigma, 0.0) - naive).abs() < 1e-10);
    }

    #[test]
    fn invalid_rho_is_rejected() {
        assert_eq!(
            cs_loglik_cell(&[1.0, 2.0, 3.0], 1.0, -0.6),
            f64::NEG_INFINITY
        );
        assert_eq!(cs_loglik_cell(&[1.0, 2.0], 1.0, 1.0), f64::NEG_INFINITY);
    }

    #[test]
    fn time_zero_rows_form_one_group() {
        let ds = crate::fixtures::seal_strength();
        let groups = likelihood_groups(&ds);
        assert_eq!(groups[0].len(), 10);
        assert_eq!(groups.iter().map(Vec::len).sum::<usize>(), 210);
    }

    proptest! {
        #[test]
        fn closed_form_matches_dense(
            e in proptest::collection::vec(-10.0f64..10.0, 1..=5),
            sigma in 0.1f64..20.0,
            rho in -0.2f64..0.98,
        ) {
            prop_assume!(cs_valid(e.len(), rho));
            let a = cs_loglik_cell(&e, sigma, rho);
            let b = dense_loglik(&e, sigma, rho);
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{} vs {}", a, b);
        }

        #[test]
        fn whitening_reproduces_quadratic(
            e in proptest::collection::vec(-10.0f64..10.0, 1..=6),
            rho in 0.0f64..0.95,
        ) {
            let m = e.len();
            let mean = e.iter().sum::<f64>() / m as f64;
            let c = whitening_coef(m, rho);
            let w: f64 = e.iter().map(|v| (v - c * mean).powi(2)).sum();
            let (q, s) = e.iter().fold((0.0, 0.0), |(q, s), v| (q + v * v, s + v));
            let quad = cs_quadratic(m, q, s, 1.0, rho);
            prop_assert!((w / (1.0 - rho) - quad).abs() <= 1e-9 * quad.max(1.0));
        }
    }
}
