use super::OptimResult;
use crate::error::{AddtError, Result};

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    /// Converged once every vertex lies within `xtol * max(1, |x_best|_inf)`
    /// of the best vertex in every coordinate.
    pub xtol: f64,
    /// Optional function-value spread test, `f_worst - f_best <= ftol * (|f_best| + ftol)`.
    /// Zero disables it.
    pub ftol: f64,
    pub max_iter: usize,
    /// Per-coordinate offsets of the initial simplex. Defaults to 5% of each
    /// start coordinate (0.00025 for zero coordinates).
    pub initial_step: Option<Vec<f64>>,
    pub keep_trace: bool,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            xtol: 1e-8,
            ftol: 0.0,
            max_iter: 100_000,
            initial_step: None,
            keep_trace: false,
        }
    }
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Derivative-free simplex minimization.
///
/// Non-finite objective values inside the run are treated as `+inf`, which
/// keeps the simplex out of invalid regions. The returned point is never
/// worse than `start`.
pub fn nelder_mead<F>(mut f: F, start: &[f64], opts: &NelderMeadOptions) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    if n == 0 {
        return Err(AddtError::InvalidArgument("empty start vector".into()));
    }
    let f0 = f(start);
    if !f0.is_finite() {
        return Err(AddtError::NonFinite {
            context: format!("start point {start:?}"),
        });
    }
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    values.push(f0);
    for i in 0..n {
        let mut v = start.to_vec();
        let step = match &opts.initial_step {
            Some(s) => s[i],
            None if start[i] != 0.0 => 0.05 * start[i],
            None => 0.00025,
        };
        v[i] += step;
        values.push(eval(&v));
        simplex.push(v);
    }

    let mut trace = opts.keep_trace.then(Vec::new);
    let mut order: Vec<usize> = (0..=n).collect();
    let mut iterations = 0;
    let mut converged = false;

    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let best = order[0];
        let worst = order[n];
        let second = order[n - 1];
        if let Some(t) = trace.as_mut() {
            t.push(simplex[best].clone());
        }

        let scale = simplex[best].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let spread = simplex.iter().fold(0.0f64, |m, v| {
            v.iter()
                .zip(&simplex[best])
                .fold(m, |m, (a, b)| m.max((a - b).abs()))
        });
        let fspread = values[worst] - values[best];
        if spread <= opts.xtol * scale
            || (opts.ftol > 0.0 && fspread <= opts.ftol * (values[best].abs() + opts.ftol))
        {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &idx in order.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x / n as f64;
            }
        }
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = eval(&xr);
        if fr < values[best] {
            let xe = along(EXPAND);
            let fe = eval(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        // contraction: outside when the reflected point beats the worst vertex
        let (xc, fc) = if fr < values[worst] {
            let x = along(CONTRACT * REFLECT);
            let v = eval(&x);
            (x, v)
        } else {
            let x = along(-CONTRACT);
            let v = eval(&x);
            (x, v)
        };
        if fc < values[worst].min(fr) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &idx in order.iter().skip(1) {
            for (x, a) in simplex[idx].iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            values[idx] = eval(&simplex[idx]);
        }
    }

    let best = order[0];
    Ok(OptimResult {
        point: simplex[best].clone(),
        value: values[best],
        iterations,
        converged,
        trace,
    })
}
