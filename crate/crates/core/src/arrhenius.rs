//! Temperature transforms, the log10 time / inverse-Kelvin line, and the
//! thermal index shared by every estimation method.

use serde::{Deserialize, Serialize};

use crate::error::{AddtError, Result};

/// Celsius-to-Kelvin offset used throughout (273.16, not 273.15).
pub const KELVIN_OFFSET: f64 = 273.16;

/// Scale of the semiparametric stress transform (≈ 1 / Boltzmann constant in eV/K).
pub const SEMI_SCALE: f64 = 11605.0;

/// Default target time for the thermal index, in hours.
pub const DEFAULT_TARGET_TIME_H: f64 = 100_000.0;

fn kelvin(temp_c: f64) -> Result<f64> {
    let k = temp_c + KELVIN_OFFSET;
    if k > 0.0 && k.is_finite() {
        Ok(k)
    } else {
        Err(AddtError::NonPhysicalTemperature(temp_c))
    }
}

/// `1 / (temp_c + 273.16)`.
pub fn inv_kelvin(temp_c: f64) -> Result<f64> {
    kelvin(temp_c).map(|k| 1.0 / k)
}

/// `-11605 / (temp_c + 273.16)`; increasing in temperature.
pub fn semi_transform(temp_c: f64) -> Result<f64> {
    kelvin(temp_c).map(|k| -SEMI_SCALE / k)
}

/// `log10(m) = beta0 + beta1 / (T + 273.16)` with `m` in hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrheniusLine {
    pub beta0: f64,
    pub beta1: f64,
}

impl ArrheniusLine {
    pub fn new(beta0: f64, beta1: f64) -> Self {
        Self { beta0, beta1 }
    }

    pub fn log10_time(&self, temp_c: f64) -> Result<f64> {
        Ok(self.beta0 + self.beta1 * inv_kelvin(temp_c)?)
    }

    pub fn failure_time(&self, temp_c: f64) -> Result<f64> {
        self.log10_time(temp_c).map(|l| 10f64.powf(l))
    }

    /// Slope sign check; a non-positive slope means failure time does not
    /// shorten with temperature.
    pub fn is_physical(&self) -> bool {
        self.beta1 > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// Thermal index with optional uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TIEstimate {
    pub ti_c: f64,
    pub target_time_h: f64,
    pub std: Option<f64>,
    pub ci: Option<ConfidenceInterval>,
}

impl TIEstimate {
    pub fn point(ti_c: f64, target_time_h: f64) -> Self {
        Self {
            ti_c,
            target_time_h,
            std: None,
            ci: None,
        }
    }

    /// Integer display used for the least-squares summary.
    pub fn rounded(&self) -> i64 {
        self.ti_c.round() as i64
    }
}

/// Temperature (°C) at which the line predicts `target_time_h`.
pub fn ti_from_line(line: &ArrheniusLine, target_time_h: f64) -> Result<TIEstimate> {
    if !(target_time_h > 0.0) {
        return Err(AddtError::InvalidArgument(format!(
            "target time must be positive, got {target_time_h}"
        )));
    }
    let denom = target_time_h.log10() - line.beta0;
    if denom == 0.0 || !denom.is_finite() {
        return Err(AddtError::DegenerateLine {
            beta0: line.beta0,
            beta1: line.beta1,
        });
    }
    Ok(TIEstimate::point(
        line.beta1 / denom - KELVIN_OFFSET,
        target_time_h,
    ))
}

/// Ordinary least squares of `log10(time)` on inverse Kelvin temperature.
pub fn fit_line(points: &[(f64, f64)]) -> Result<ArrheniusLine> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(temp_c, time_h) in points {
        if !(time_h > 0.0) {
            return Err(AddtError::InvalidArgument(format!(
                "failure time must be positive, got {time_h} at {temp_c} °C"
            )));
        }
        xs.push(inv_kelvin(temp_c)?);
        ys.push(time_h.log10());
    }
    let mut distinct = xs.clone();
    distinct.sort_by(|a, b| a.total_cmp(b));
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(AddtError::TooFewLevels(distinct.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let beta1 = sxy / sxx;
    Ok(ArrheniusLine::new(my - beta1 * mx, beta1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn transforms() {
        assert_relative_eq!(inv_kelvin(50.0).unwrap(), 3.094442e-3, max_relative = 1e-6);
        assert_relative_eq!(inv_kelvin(0.0).unwrap(), 3.660858e-3, max_relative = 1e-6);
        assert!(inv_kelvin(-273.16).is_err());
        assert_relative_eq!(semi_transform(70.0).unwrap(), -33.8180, epsilon = 1e-4);
        assert_relative_eq!(semi_transform(50.0).unwrap(), -35.9110, epsilon = 1e-4);
        let (a, b, c) = (
            semi_transform(50.0).unwrap(),
            semi_transform(60.0).unwrap(),
            semi_transform(70.0).unwrap(),
        );
        assert!(a < b && b < c);
    }

    #[test]
    fn ti_examples() {
        let ti = ti_from_line(&ArrheniusLine::new(-13.7805, 5535.0907), 1e5).unwrap();
        assert_relative_eq!(ti.ti_c, 21.565, epsilon = 1e-3);
        assert_eq!(ti.rounded(), 22);
        let ml = ti_from_line(&ArrheniusLine::new(-16.6830, 6478.5641), 1e5).unwrap();
        assert_relative_eq!(ml.ti_c, 25.62, epsilon = 0.01);
        let zero = ti_from_line(&ArrheniusLine::new(0.0, KELVIN_OFFSET * 5.0), 1e5).unwrap();
        assert!(zero.ti_c.abs() < 1e-12);
        assert!(matches!(
            ti_from_line(&ArrheniusLine::new(5.0, 100.0), 1e5),
            Err(AddtError::DegenerateLine { .. })
        ));
    }

    #[test]
    fn adhesive_ls_line() {
        let line = fit_line(&[(50.0, 2063.0924), (60.0, 797.1901), (70.0, 206.1681)]).unwrap();
        assert!((line.beta0 + 13.7805).abs() < 5e-4, "{line:?}");
        assert!((line.beta1 - 5535.0907).abs() < 0.05, "{line:?}");
    }

    #[test]
    fn seal_ls_line() {
        let line = fit_line(&[
            (200.0, 2862.3430),
            (250.0, 2282.3303),
            (300.0, 509.2084),
            (350.0, 622.0857),
        ])
        .unwrap();
        assert!((line.beta0 - 0.1934).abs() < 5e-4, "{line:?}");
        assert!((line.beta1 - 1565.1731).abs() < 0.05, "{line:?}");
    }

    #[test]
    fn two_points_exact() {
        let truth = ArrheniusLine::new(-12.0, 5000.0);
        let pts: Vec<_> = [40.0, 90.0]
            .iter()
            .map(|&t| (t, truth.failure_time(t).unwrap()))
            .collect();
        let line = fit_line(&pts).unwrap();
        assert_relative_eq!(line.beta0, truth.beta0, max_relative = 1e-10);
        assert_relative_eq!(line.beta1, truth.beta1, max_relative = 1e-10);
    }

    #[test]
    fn needs_two_temperatures() {
        assert!(fit_line(&[(50.0, 10.0), (50.0, 20.0)]).is_err());
        assert!(fit_line(&[(50.0, 10.0)]).is_err());
    }
}
