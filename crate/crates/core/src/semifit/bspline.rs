use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{AddtError, Result};

/// B-spline basis of a given degree on a full (possibly clamped) knot vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineBasis {
    degree: usize,
    knots: Vec<f64>,
}

impl SplineBasis {
    /// Basis on an arbitrary nondecreasing knot vector of length at least
    /// `2 (degree + 1)`. The valid domain is `[t_q, t_{len - q - 1}]`.
    pub fn from_knots(degree: usize, knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 * (degree + 1) {
            return Err(AddtError::InvalidArgument(format!(
                "{} knots cannot carry a degree-{degree} basis",
                knots.len()
            )));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(AddtError::InvalidArgument(
                "knots must be finite and nondecreasing".into(),
            ));
        }
        let b = Self { degree, knots };
        let (lo, hi) = b.domain();
        if !(hi > lo) {
            return Err(AddtError::InvalidArgument("empty spline domain".into()));
        }
        Ok(b)
    }

    /// Clamped basis: boundary knots repeated `degree + 1` times.
    pub fn clamped(degree: usize, interior: &[f64], lower: f64, upper: f64) -> Result<Self> {
        if let Some(k) = interior.iter().find(|&&k| !(k > lower && k < upper)) {
            return Err(AddtError::InvalidArgument(format!(
                "interior knot {k} outside ({lower}, {upper})"
            )));
        }
        let mut knots = vec![lower; degree + 1];
        knots.extend_from_slice(interior);
        knots.extend(std::iter::repeat_n(upper, degree + 1));
        Self::from_knots(degree, knots)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Knots strictly inside the domain.
    pub fn interior_knots(&self) -> &[f64] {
        &self.knots[self.degree + 1..self.knots.len() - self.degree - 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (
            self.knots[self.degree],
            self.knots[self.knots.len() - self.degree - 1],
        )
    }

    /// Number of basis functions.
    pub fn size(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    /// Index `mu` with `t_mu <= z < t_{mu+1}`; the right end maps to the last
    /// non-empty span.
    fn span(&self, z: f64) -> usize {
        let q = self.degree;
        let last = self.knots.len() - q - 2;
        if z >= self.knots[last + 1] {
            let mut mu = last;
            while mu > q && self.knots[mu] == self.knots[mu + 1] {
                mu -= 1;
            }
            return mu;
        }
        // largest mu in [q, last] with t_mu <= z
        let upper = self.knots[q..=last].partition_point(|&t| t <= z);
        (q + upper - 1).max(q)
    }

    /// Writes all basis values at `z` into `out` (length `size()`). Points
    /// outside the domain are clamped to it; the return value flags that.
    pub fn eval_into(&self, z: f64, out: &mut [f64]) -> bool {
        let (lo, hi) = self.domain();
        let clamped = z < lo || z > hi;
        let z = z.clamp(lo, hi);
        out.fill(0.0);
        let q = self.degree;
        let t = &self.knots;
        let mu = self.span(z);
        // de Boor triangle for the q + 1 nonzero functions
        let mut n = vec![0.0; q + 1];
        let mut left = vec![0.0; q + 1];
        let mut right = vec![0.0; q + 1];
        n[0] = 1.0;
        for j in 1..=q {
            left[j] = z - t[mu + 1 - j];
            right[j] = t[mu + j] - z;
            let mut saved = 0.0;
            for r in 0..j {
                let denom = right[r + 1] + left[j - r];
                let temp = if denom == 0.0 { 0.0 } else { n[r] / denom };
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
        }
        for (r, v) in n.into_iter().enumerate() {
            out[mu - q + r] = v;
        }
        clamped
    }

    pub fn evaluate(&self, z: f64) -> (Vec<f64>, bool) {
        let mut out = vec![0.0; self.size()];
        let clamped = self.eval_into(z, &mut out);
        (out, clamped)
    }

    /// Spline value `sum_l coef_l B_l(z)`.
    pub fn value(&self, coef: &[f64], z: f64) -> f64 {
        let (b, _) = self.evaluate(z);
        b.iter().zip(coef).map(|(b, c)| b * c).sum()
    }

    /// Design matrix with one row per point, and the number of clamped points.
    pub fn design(&self, z: &[f64]) -> (DMatrix<f64>, usize) {
        let p = self.size();
        let mut m = DMatrix::zeros(z.len(), p);
        let mut row = vec![0.0; p];
        let mut clamped = 0;
        for (i, &v) in z.iter().enumerate() {
            if self.eval_into(v, &mut row) {
                clamped += 1;
            }
            for (j, b) in row.iter().enumerate() {
                m[(i, j)] = *b;
            }
        }
        (m, clamped)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `(t_{l+q+1} - t_l) [t_l, ..., t_{l+q+1}] (. - z)_+^q` for distinct knots.
    fn truncated_power(knots: &[f64], q: usize, l: usize, z: f64) -> f64 {
        let pts = &knots[l..=l + q + 1];
        let mut dd: Vec<f64> = pts
            .iter()
            .map(|&t| (t - z).max(0.0).powi(q as i32))
            .collect();
        for order in 1..=q + 1 {
            for i in 0..=(q + 1 - order) {
                dd[i] = (dd[i + 1] - dd[i]) / (pts[i + order] - pts[i]);
            }
        }
        (pts[q + 1] - pts[0]) * dd[0]
    }

    #[test]
    fn matches_truncated_power_oracle() {
        let q = 3;
        let knots: Vec<f64> = (-3..=13).map(|i| i as f64 / 10.0).collect();
        let b = SplineBasis::from_knots(q, knots.clone()).unwrap();
        let (lo, hi) = b.domain();
        assert_eq!((lo, hi), (0.0, 1.0));
        for i in 0..100 {
            let z = lo + (hi - lo) * (i as f64 + 0.5) / 100.0;
            let (v, clamped) = b.evaluate(z);
            assert!(!clamped);
            for (l, got) in v.iter().enumerate() {
                let want = truncated_power(&knots, q, l, z);
                assert!((got - want).abs() < 1e-10, "l={l} z={z}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn degree_zero_is_an_indicator() {
        let b = SplineBasis::from_knots(0, vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(b.evaluate(0.5).0, vec![1.0, 0.0]);
        assert_eq!(b.evaluate(2.0).0, vec![0.0, 1.0]);
    }

    #[test]
    fn clamped_endpoints() {
        let b = SplineBasis::clamped(3, &[180.66], 0.0, 2016.0).unwrap();
        assert_eq!(b.size(), 5);
        assert_eq!(b.interior_knots(), &[180.66]);
        let (v0, _) = b.evaluate(0.0);
        assert_eq!(v0[0], 1.0);
        let (v1, _) = b.evaluate(2016.0);
        assert!((v1[4] - 1.0).abs() < 1e-15);
        let (_, clamped) = b.evaluate(3000.0);
        assert!(clamped);
    }

    #[test]
    fn invalid_knots() {
        assert!(SplineBasis::clamped(3, &[5.0], 0.0, 4.0).is_err());
        assert!(SplineBasis::from_knots(3, vec![0.0, 1.0]).is_err());
        assert!(SplineBasis::from_knots(1, vec![0.0, 2.0, 1.0, 3.0]).is_err());
    }

    proptest! {
        #[test]
        fn partition_of_unity(
            mut interior in proptest::collection::vec(0.01f64..0.99, 0..8),
            degree in 0usize..5,
            zs in proptest::collection::vec(0.0f64..=1.0, 1..50),
        ) {
            interior.sort_by(|a, b| a.total_cmp(b));
            let b = SplineBasis::clamped(degree, &interior, 0.0, 1.0).unwrap();
            for z in zs {
                let (v, _) = b.evaluate(z);
                prop_assert!(v.iter().all(|x| *x >= -1e-15));
                prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}
