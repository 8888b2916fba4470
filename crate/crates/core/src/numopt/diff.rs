use nalgebra::DMatrix;

use crate::error::{AddtError, Result};

pub const DEFAULT_GRADIENT_STEP: f64 = 1e-6;
pub const DEFAULT_HESSIAN_STEP: f64 = 1e-4;

fn step(x: f64, rel: f64) -> f64 {
    rel * x.abs().max(1.0)
}

fn checked<F: FnMut(&[f64]) -> f64>(
    f: &mut F,
    x: &[f64],
    what: impl Fn() -> String,
) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(AddtError::NonFinite { context: what() })
    }
}

/// Central-difference gradient with step `rel_step * max(|x_i|, 1)`.
pub fn fd_gradient<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x: &[f64],
    rel_step: f64,
) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = step(x[i], rel_step);
        probe[i] = x[i] + h;
        let up = checked(&mut f, &probe, || format!("x[{i}] + {h}"))?;
        probe[i] = x[i] - h;
        let down = checked(&mut f, &probe, || format!("x[{i}] - {h}"))?;
        probe[i] = x[i];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// Central-difference Hessian, symmetrized as `(H + H^T) / 2`.
pub fn fd_hessian<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x: &[f64],
    rel_step: f64,
) -> Result<DMatrix<f64>> {
    let n = x.len();
    let h: Vec<f64> = x.iter().map(|&v| step(v, rel_step)).collect();
    let f0 = checked(&mut f, x, || "the expansion point".to_string())?;
    let mut hess = DMatrix::zeros(n, n);
    let mut probe = x.to_vec();
    for i in 0..n {
        probe[i] = x[i] + h[i];
        let up = checked(&mut f, &probe, || format!("x[{i}] + {}", h[i]))?;
        probe[i] = x[i] - h[i];
        let down = checked(&mut f, &probe, || format!("x[{i}] - {}", h[i]))?;
        probe[i] = x[i];
        hess[(i, i)] = (up - 2.0 * f0 + down) / (h[i] * h[i]);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                probe[i] = x[i] + si * h[i];
                probe[j] = x[j] + sj * h[j];
                let v = checked(&mut f, &probe, || {
                    format!("x[{i}] {:+} h, x[{j}] {:+} h", si, sj)
                });
                probe[i] = x[i];
                probe[j] = x[j];
                v
            };
            let pp = corner(1.0, 1.0)?;
            let pm = corner(1.0, -1.0)?;
            let mp = corner(-1.0, 1.0)?;
            let mm = corner(-1.0, -1.0)?;
            let v = (pp - pm - mp + mm) / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let sym = (&hess + hess.transpose()) * 0.5;
    Ok(sym)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_second_derivative() {
        let h = fd_hessian(|x| x[0].exp(), &[0.0], DEFAULT_HESSIAN_STEP).unwrap();
        assert!((h[(0, 0)] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn quadratic_form() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, -0.5, 1.0, 3.0, 0.2, -0.5, 0.2, 2.0]);
        let f = |x: &[f64]| {
            let v = nalgebra::DVector::from_column_slice(x);
            0.5 * (v.transpose() * &a * &v)[(0, 0)]
        };
        let h = fd_hessian(f, &[0.3, -1.2, 2.0], DEFAULT_HESSIAN_STEP).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[(i, j)] - a[(i, j)]).abs() <= 1e-5 * a[(i, j)].abs().max(1.0));
            }
        }
    }

    #[test]
    fn gradient_of_cubic() {
        let g = fd_gradient(
            |x| x[0].powi(3) + 2.0 * x[1],
            &[2.0, 5.0],
            DEFAULT_GRADIENT_STEP,
        )
        .unwrap();
        assert!((g[0] - 12.0).abs() < 1e-6 && (g[1] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reports_offending_perturbation() {
        let err = fd_hessian(|x| x[0].ln(), &[1e-5], 1.0).unwrap_err();
        assert!(err.to_string().contains("x[0] -"), "{err}");
    }
}
