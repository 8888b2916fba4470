use nalgebra::{DMatrix, DVector};

use super::least_squares;
use crate::error::{AddtError, Result};

/// Solution of a least-squares problem with nonincreasing coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneFit {
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    /// Weighted residual sum of squares.
    pub rss: f64,
    /// Largest violation of the optimality conditions, relative to `|M^T y|`.
    pub kkt_residual: f64,
}

/// Minimizes `sum w_i (y_i - (B g)_i)^2` subject to `g_1 >= g_2 >= ... >= g_K`.
///
/// Uses `g_l = c - sum_{k<l} d_k` with `d >= 0` and an active-set
/// nonnegative least-squares solve in which `c` is unconstrained.
pub fn monotone_lsq(
    basis: &DMatrix<f64>,
    y: &[f64],
    weights: Option<&[f64]>,
) -> Result<MonotoneFit> {
    let (n, k) = basis.shape();
    if y.len() != n {
        return Err(AddtError::InvalidArgument(format!(
            "monotone_lsq: {n} basis rows for {} responses",
            y.len()
        )));
    }
    if k == 0 {
        return Err(AddtError::InvalidArgument("empty basis".into()));
    }
    let root_w: Vec<f64> = match weights {
        Some(w) if w.len() != n => {
            return Err(AddtError::InvalidArgument("weight length mismatch".into()))
        }
        Some(w) if w.iter().any(|v| !(*v >= 0.0)) => {
            return Err(AddtError::InvalidArgument("negative weight".into()))
        }
        Some(w) => w.iter().map(|v| v.sqrt()).collect(),
        None => vec![1.0; n],
    };

    // m[:, 0] = sum of all basis columns; m[:, j] = -sum_{l >= j} basis[:, l]
    let mut m = DMatrix::zeros(n, k);
    for i in 0..n {
        let mut tail = 0.0;
        for l in (0..k).rev() {
            tail += basis[(i, l)];
            if l > 0 {
                m[(i, l)] = -tail * root_w[i];
            }
        }
        m[(i, 0)] = tail * root_w[i];
    }
    let yw = DVector::from_iterator(n, y.iter().zip(&root_w).map(|(v, w)| v * w));

    if n < k {
        return Err(AddtError::RankDeficient(format!(
            "{n} rows for {k} coefficients"
        )));
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) || svd.singular_values.min() / smax < 1e-12 {
        return Err(AddtError::RankDeficient(
            "spline design has empty or collinear columns".into(),
        ));
    }

    let mty = m.transpose() * &yw;
    let scale = mty.amax().max(1.0);
    let tol = 1e-11 * scale;

    let solve_on = |passive: &[bool]| -> Result<DVector<f64>> {
        let cols: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
        let sub = m.select_columns(cols.iter());
        let s = least_squares(&sub, &yw)?;
        let mut full = DVector::zeros(k);
        for (v, &j) in s.iter().zip(&cols) {
            full[j] = *v;
        }
        Ok(full)
    };

    let mut passive = vec![false; k];
    passive[0] = true;
    let mut z = solve_on(&passive)?;
    let mut outer = 0;
    loop {
        let w = m.transpose() * (&yw - &m * &z);
        let candidate = (1..k)
            .filter(|&j| !passive[j])
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        match candidate {
            Some(j) if w[j] > tol => passive[j] = true,
            _ => break,
        }
        outer += 1;
        if outer > 10 * k + 10 {
            break;
        }
        loop {
            let s = solve_on(&passive)?;
            let infeasible: Vec<usize> = (1..k).filter(|&j| passive[j] && s[j] <= 0.0).collect();
            if infeasible.is_empty() {
                z = s;
                break;
            }
            let alpha = infeasible
                .iter()
                .map(|&j| z[j] / (z[j] - s[j]))
                .fold(f64::INFINITY, f64::min);
            z += (&s - &z) * alpha;
            for j in 1..k {
                if passive[j] && z[j] <= tol * 1e-3 {
                    passive[j] = false;
                    z[j] = 0.0;
                }
            }
        }
    }

    let mut coefficients = Vec::with_capacity(k);
    let mut g = z[0];
    coefficients.push(g);
    for j in 1..k {
        g -= z[j].max(0.0);
        coefficients.push(g);
    }
    let fitted: Vec<f64> = (0..n)
        .map(|i| (0..k).map(|l| basis[(i, l)] * coefficients[l]).sum())
        .collect();
    let rss = fitted
        .iter()
        .zip(y)
        .zip(&root_w)
        .map(|((f, v), w)| (w * (v - f)).powi(2))
        .sum();

    let w = m.transpose() * (&yw - &m * &z);
    let mut kkt = w[0].abs();
    for j in 1..k {
        let v = if z[j] > 0.0 {
            w[j].abs()
        } else {
            w[j].max(0.0)
        };
        kkt = kkt.max(v);
    }

    Ok(MonotoneFit {
        coefficients,
        fitted,
        rss,
        kkt_residual: kkt / scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn indicator_basis(groups: &[usize]) -> DMatrix<f64> {
        let k = groups.iter().max().unwrap() + 1;
        DMatrix::from_fn(groups.len(), k, |i, j| f64::from(groups[i] == j))
    }

    #[test]
    fn unconstrained_when_already_ordered() {
        let b = indicator_basis(&[0, 0, 1, 1, 2]);
        let f = monotone_lsq(&b, &[5.0, 7.0, 3.0, 3.0, 1.0], None).unwrap();
        let want = [6.0, 3.0, 1.0];
        for (a, w) in f.coefficients.iter().zip(want) {
            assert!((a - w).abs() < 1e-12);
        }
    }

    #[test]
    fn violators_are_pooled() {
        // group means 2 and 4 violate the order; pooled mean is 3
        let b = indicator_basis(&[0, 0, 1, 1]);
        let f = monotone_lsq(&b, &[1.0, 3.0, 3.0, 5.0], None).unwrap();
        assert!((f.coefficients[0] - 3.0).abs() < 1e-12);
        assert!((f.coefficients[1] - 3.0).abs() < 1e-12);
        assert!(f.kkt_residual <= 1e-8);
    }

    #[test]
    fn weights_shift_the_pooled_value() {
        let b = indicator_basis(&[0, 1]);
        let f = monotone_lsq(&b, &[1.0, 4.0], Some(&[3.0, 1.0])).unwrap();
        assert!((f.coefficients[0] - 1.75).abs() < 1e-12);
    }

    #[test]
    fn empty_column_is_rank_deficient() {
        let b = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(
            monotone_lsq(&b, &[1.0, 2.0], None),
            Err(AddtError::RankDeficient(_))
        ));
    }

    // Brute-force oracle for three coefficients: the optimum lies either in
    // the interior (ordinary LS) or on a face where adjacent coefficients tie.
    fn brute_force_rss(b: &DMatrix<f64>, y: &[f64]) -> f64 {
        let yv = DVector::from_column_slice(y);
        let rss = |g: &DVector<f64>| (&yv - b * g).norm_squared();
        let mut best = f64::INFINITY;
        let full = least_squares(b, &yv).unwrap();
        if full[0] >= full[1] && full[1] >= full[2] {
            best = best.min(rss(&full));
        }
        // tie patterns: {0=1}, {1=2}, {0=1=2}
        let merges: [&[&[usize]]; 3] = [&[&[0, 1], &[2]], &[&[0], &[1, 2]], &[&[0, 1, 2]]];
        for groups in merges {
            let reduced = DMatrix::from_fn(b.nrows(), groups.len(), |i, g| {
                groups[g].iter().map(|&l| b[(i, l)]).sum()
            });
            let Ok(c) = least_squares(&reduced, &yv) else {
                continue;
            };
            let mut g = DVector::zeros(3);
            for (gi, grp) in groups.iter().enumerate() {
                for &l in *grp {
                    g[l] = c[gi];
                }
            }
            if g[0] >= g[1] - 1e-12 && g[1] >= g[2] - 1e-12 {
                best = best.min(rss(&g));
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            raw in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, -5.0f64..5.0), 6..20)
        ) {
            let n = raw.len();
            let b = DMatrix::from_fn(n, 3, |i, j| match j { 0 => raw[i].0 + 0.1, 1 => raw[i].1, _ => raw[i].2 });
            let y: Vec<f64> = raw.iter().map(|r| r.3).collect();
            let fit = monotone_lsq(&b, &y, None).unwrap();
            let oracle = brute_force_rss(&b, &y);
            prop_assert!(fit.rss <= oracle + 1e-9 * oracle.max(1.0), "{} vs {}", fit.rss, oracle);
            prop_assert!(fit.coefficients.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(fit.kkt_residual <= 1e-8);
        }
    }
}
