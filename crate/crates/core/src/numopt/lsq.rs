use nalgebra::{DMatrix, DVector};

use crate::error::{AddtError, Result};

const RANK_TOL: f64 = 1e-12;

/// Ordinary least squares via SVD. Fails when the design is numerically
/// rank deficient.
pub fn least_squares(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    if x.nrows() < x.ncols() {
        return Err(AddtError::RankDeficient(format!(
            "{} rows for {} coefficients",
            x.nrows(),
            x.ncols()
        )));
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin / smax < RANK_TOL {
        return Err(AddtError::RankDeficient(format!(
            "condition ratio {:.3e}",
            if smax > 0.0 { smin / smax } else { 0.0 }
        )));
    }
    svd.solve(y, 0.0)
        .map_err(|e| AddtError::RankDeficient(e.to_string()))
}

/// Least-squares polynomial of the given degree. Coefficients are returned
/// in increasing power order for the unscaled abscissa.
pub fn polyfit(t: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>> {
    if t.len() != y.len() {
        return Err(AddtError::InvalidArgument(format!(
            "polyfit: {} abscissae for {} responses",
            t.len(),
            y.len()
        )));
    }
    let scale = t
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let x = DMatrix::from_fn(t.len(), degree + 1, |i, k| (t[i] / scale).powi(k as i32));
    let coef = least_squares(&x, &DVector::from_column_slice(y))?;
    Ok(coef
        .iter()
        .enumerate()
        .map(|(k, c)| c / scale.powi(k as i32))
        .collect())
}

/// Horner evaluation of increasing-power coefficients.
pub fn polyval(coef: &[f64], t: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * t + c)
}
