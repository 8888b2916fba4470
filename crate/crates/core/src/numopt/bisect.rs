use crate::error::{AddtError, Result};

/// Root of `f` on `[lo, hi]` by bisection. Requires `f(lo) * f(hi) <= 0`;
/// stops once the bracket is narrower than `tol * max(1, |mid|)`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(AddtError::NonFinite {
            context: format!("bracket [{a}, {b}]"),
        });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(AddtError::NoSignChange { lo: a, hi: b });
    }
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if (b - a) <= tol * mid.abs().max(1.0) {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
