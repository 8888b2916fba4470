const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of a unimodal function on `[lo, hi]`,
/// stopping when the bracket is narrower than `tol`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while (hi - lo).abs() > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximizes `f` on `[lo, hi]`: a `grid`-point scan locates the best cell,
/// then golden-section refines inside the neighbouring cells. Non-finite
/// values count as `-inf`. Returns `(argmax, max)`.
pub fn maximize_scalar<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> (f64, f64) {
    let grid = grid.max(3);
    let mut g = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    };
    let step = (hi - lo) / (grid - 1) as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..grid {
        let v = g(lo + step * i as f64);
        if v > best.1 {
            best = (i, v);
        }
    }
    let a = lo + step * best.0.saturating_sub(1) as f64;
    let b = (lo + step * (best.0 + 1) as f64).min(hi);
    let (x, v) = golden_section_min(|x| -g(x), a, b, tol);
    if -v >= best.1 {
        (x, -v)
    } else {
        (lo + step * best.0 as f64, best.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let (x, v) = golden_section_min(|x| (x - 1.3).powi(2) + 2.0, 0.0, 5.0, 1e-9);
        // the minimum is only located to ~sqrt(machine epsilon) by function values
        assert!((x - 1.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scan_then_refine_finds_global_max() {
        // two bumps; the taller one is near 4
        let f = |x: f64| (-(x - 1.0).powi(2)).exp() + 2.0 * (-(x - 4.0).powi(2) * 4.0).exp();
        let (x, _) = maximize_scalar(f, 0.0, 6.0, 40, 1e-9);
        assert!((x - 4.0).abs() < 1e-3, "{x}");
    }
}
