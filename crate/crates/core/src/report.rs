//! Text summaries, the JSON report, and plot-data series.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::arrhenius::inv_kelvin;
use crate::dataset::DegradationDataset;
use crate::error::{AddtError, Result};
use crate::mlfit::{mean_path, MLFit};
use crate::semifit::SemiFit;
use crate::tradls::LSFit;

pub const SCHEMA_VERSION: &str = "addt-report/1";
/// Significant digits kept for floats in the JSON report.
pub const JSON_SIG_DIGITS: usize = 10;
/// Points per level in the fitted-curve plot series.
pub const PLOT_GRID: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub input: String,
    pub n_obs: usize,
    pub threshold_pct: f64,
    pub target_time_h: f64,
    pub conf_level: f64,
    pub methods: Vec<String>,
    pub semi_cor: bool,
    pub knots: Option<Vec<f64>>,
    pub initial_value: Option<f64>,
    pub subset: Option<String>,
    pub time_zero_remapped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaledPoint {
    pub temp_c: f64,
    pub time_h: f64,
    pub scaled_time: f64,
    pub response: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiSection {
    #[serde(flatten)]
    pub fit: SemiFit,
    pub scaled_points: Vec<ScaledPoint>,
}

impl SemiSection {
    pub fn new(fit: SemiFit, ds: &DegradationDataset) -> Result<Self> {
        let scaled_points = ds
            .observations()
            .iter()
            .map(|o| {
                Ok(ScaledPoint {
                    temp_c: o.temp_c,
                    time_h: o.time_h,
                    scaled_time: fit.scaled_time(o.time_h, o.temp_c)?,
                    response: o.response,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { fit, scaled_points })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodError {
    pub method: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub metadata: Metadata,
    pub ls: Option<LSFit>,
    pub ml: Option<MLFit>,
    pub semi: Option<SemiSection>,
    pub errors: Vec<MethodError>,
    pub warnings: Vec<String>,
}

/// Rounds to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .unwrap_or(v)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n
                .as_f64()
                .and_then(|f| serde_json::Number::from_f64(round_sig(f, JSON_SIG_DIGITS)))
            {
                *n = x;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut v =
            serde_json::to_value(self).map_err(|e| AddtError::InvalidArgument(e.to_string()))?;
        round_value(&mut v);
        let mut s = serde_json::to_string_pretty(&v)
            .map_err(|e| AddtError::InvalidArgument(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Sections in the order LS, ML, SEMI, followed by failures and warnings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut blocks = Vec::new();
        if let Some(ls) = &self.ls {
            blocks.push(text_ls(ls));
        }
        if let Some(ml) = &self.ml {
            blocks.push(text_ml(ml));
        }
        if let Some(semi) = &self.semi {
            blocks.push(text_semi(&semi.fit));
        }
        out.push_str(&blocks.join("\n"));
        if !self.errors.is_empty() {
            out.push_str("\nFailed:\n");
            for e in &self.errors {
                let _ = writeln!(out, "  {}: {}", e.method, e.message);
            }
        }
        if !self.warnings.is_empty() {
            out.push_str("\nWarnings:\n");
            for w in &self.warnings {
                let _ = writeln!(out, "  {w}");
            }
        }
        out
    }
}

fn f4(v: f64) -> String {
    format!("{v:.4}")
}

fn opt4(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), f4)
}

pub fn text_ls(fit: &LSFit) -> String {
    let mut s = String::from("Least Squares Approach:\n");
    let _ = writeln!(s, "{:>12} {:>12}", "beta0", "beta1");
    let _ = writeln!(s, "{:>12} {:>12}", f4(fit.line.beta0), f4(fit.line.beta1));
    let _ = writeln!(s, "est.TI: {}", fit.ti.rounded());
    s.push_str("Interpolation time:\n");
    let _ = writeln!(s, "{:>8} {:>12}", "Temp", "Time");
    for ft in &fit.failure_times {
        let _ = writeln!(s, "{:>8} {:>12}", ft.temp_c, f4(ft.time_h));
    }
    s
}

pub fn text_ml(fit: &MLFit) -> String {
    let pct = round_sig(fit.conf_level * 100.0, 6);
    let mut s = String::from("Maximum Likelihood Approach:\nParameters:\n");
    let _ = writeln!(
        s,
        "{:<6} {:>12} {:>12} {:>12} {:>12}",
        "",
        "mean",
        "std",
        format!("{pct}% lower"),
        format!("{pct}% upper")
    );
    for row in &fit.summary {
        let _ = writeln!(
            s,
            "{:<6} {:>12} {:>12} {:>12} {:>12}",
            row.name,
            f4(row.estimate),
            opt4(row.std),
            opt4(row.lower),
            opt4(row.upper)
        );
    }
    s.push_str("\nTemperature-Time Relationship:\n");
    let _ = writeln!(s, "{:>12} {:>12}", "beta0", "beta1");
    let _ = writeln!(s, "{:>12} {:>12}", f4(fit.line.beta0), f4(fit.line.beta1));
    s.push_str("\nTI:\n");
    let _ = writeln!(
        s,
        "{:>12} {:>12} {:>12} {:>12}",
        "est",
        "std",
        format!("{pct}% lower"),
        format!("{pct}% upper")
    );
    let _ = writeln!(
        s,
        "{:>12} {:>12} {:>12} {:>12}",
        f4(fit.ti.ti_c),
        opt4(fit.ti.std),
        opt4(fit.ti.ci.map(|c| c.lower)),
        opt4(fit.ti.ci.map(|c| c.upper))
    );
    s.push_str("\nLoglikelihood:\n");
    let _ = writeln!(s, "{:>12}", f4(fit.loglik));
    s
}

pub fn text_semi(fit: &SemiFit) -> String {
    let mut s = String::from("Semi-Parametric Approach:\nParameters Estimates:\n");
    match fit.params.rho {
        Some(r) => {
            let _ = writeln!(s, "{:>10} {:>10}", "betahat", "rho");
            let _ = writeln!(s, "{:>10} {:>10}", f4(fit.params.beta), f4(r));
        }
        None => {
            let _ = writeln!(s, "{:>10}", "betahat");
            let _ = writeln!(s, "{:>10}", f4(fit.params.beta));
        }
    }
    s.push_str("\nTI estimates:\n");
    let _ = writeln!(s, "{:>12} {:>12} {:>12}", "TI.semi", "beta0", "beta1");
    let _ = writeln!(
        s,
        "{:>12} {:>12} {:>12}",
        f4(fit.ti.ti_c),
        f4(fit.line.beta0),
        f4(fit.line.beta1)
    );
    s.push_str("\nModel Evaluations:\n");
    let _ = writeln!(
        s,
        "{:>14} {:>12} {:>14}",
        "Loglikelihood", "AICc", "AICc.compat"
    );
    let _ = writeln!(
        s,
        "{:>14} {:>12} {:>14}",
        f4(fit.loglik),
        f4(fit.aicc),
        f4(fit.aicc_compat)
    );
    s.push_str("\nB-spline:\n");
    let (lo, hi) = fit.basis.domain();
    let _ = write!(s, "{:>14}", "Left Boundary");
    for _ in fit.basis.interior_knots() {
        let _ = write!(s, " {:>12}", "knots");
    }
    let _ = writeln!(s, " {:>14}", "Right Boundary");
    let _ = write!(s, "{:>14}", f4(lo));
    for k in fit.basis.interior_knots() {
        let _ = write!(s, " {:>12}", f4(*k));
    }
    let _ = writeln!(s, " {:>14}", f4(hi));
    s
}

fn grid(hi: f64) -> impl Iterator<Item = f64> {
    (0..PLOT_GRID).map(move |i| hi * i as f64 / (PLOT_GRID - 1) as f64)
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(|source| AddtError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(path.to_path_buf())
}

fn num(v: f64) -> String {
    round_sig(v, JSON_SIG_DIGITS).to_string()
}

/// Writes the plot-data CSVs into `dir` and returns the created paths:
/// observed points, fitted curves per method and level on a 200-point time
/// grid, the semiparametric baseline in scaled time, and each method's
/// temperature-time line.
pub fn write_plot_data(
    dir: &Path,
    ds: &DegradationDataset,
    ls: Option<&LSFit>,
    ml: Option<&MLFit>,
    semi: Option<&SemiFit>,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| AddtError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let observed = ds
        .observations()
        .iter()
        .map(|o| vec![num(o.temp_c), num(o.time_h), num(o.response)])
        .collect();
    written.push(write_csv(
        &dir.join("observed.csv"),
        &["TempC", "TimeH", "Response"],
        observed,
    )?);

    let t_max = ds.max_time();
    let levels = ds.stressed_levels();
    let mut curves = Vec::new();
    let mut lines = Vec::new();
    let mut line_rows =
        |method: &str, line: &crate::arrhenius::ArrheniusLine, ti: f64| -> Result<()> {
            let lo = ti.min(levels[0]) - 10.0;
            let hi = levels[levels.len() - 1] + 10.0;
            for i in 0..PLOT_GRID {
                let temp = lo + (hi - lo) * i as f64 / (PLOT_GRID - 1) as f64;
                lines.push(vec![
                    method.to_string(),
                    num(temp),
                    num(inv_kelvin(temp)?),
                    num(line.log10_time(temp)?),
                ]);
            }
            Ok(())
        };

    if let Some(fit) = ls {
        for p in &fit.polyfits {
            for t in grid(p.t_max) {
                curves.push(vec!["LS".into(), num(p.temp_c), num(t), num(p.eval(t))]);
            }
        }
        let points = fit
            .failure_times
            .iter()
            .map(|f| vec![num(f.temp_c), num(f.time_h), num(f.time_h.log10())])
            .collect();
        written.push(write_csv(
            &dir.join("ls_failure_times.csv"),
            &["TempC", "TimeH", "Log10Time"],
            points,
        )?);
        line_rows("LS", &fit.line, fit.ti.ti_c)?;
    }
    if let Some(fit) = ml {
        for &temp in &levels {
            for t in grid(t_max) {
                curves.push(vec![
                    "ML".into(),
                    num(temp),
                    num(t),
                    num(mean_path(t, temp, &fit.params)?),
                ]);
            }
        }
        line_rows("ML", &fit.line, fit.ti.ti_c)?;
    }
    if let Some(fit) = semi {
        for &temp in &levels {
            for t in grid(t_max) {
                curves.push(vec![
                    "SEMI".into(),
                    num(temp),
                    num(t),
                    num(fit.mean(t, temp)?),
                ]);
            }
        }
        let (lo, hi) = fit.basis.domain();
        let baseline = (0..PLOT_GRID)
            .map(|i| {
                let z = lo + (hi - lo) * i as f64 / (PLOT_GRID - 1) as f64;
                vec![num(z), num(fit.baseline(z))]
            })
            .collect();
        written.push(write_csv(
            &dir.join("semi_baseline.csv"),
            &["ScaledTime", "Baseline"],
            baseline,
        )?);
        let scaled = ds
            .observations()
            .iter()
            .map(|o| {
                Ok(vec![
                    num(o.temp_c),
                    num(o.time_h),
                    num(fit.scaled_time(o.time_h, o.temp_c)?),
                    num(o.response),
                ])
            })
            .collect::<Result<_>>()?;
        written.push(write_csv(
            &dir.join("semi_scaled.csv"),
            &["TempC", "TimeH", "ScaledTime", "Response"],
            scaled,
        )?);
        line_rows("SEMI", &fit.line, fit.ti.ti_c)?;
    }
    if !curves.is_empty() {
        written.push(write_csv(
            &dir.join("fitted_curves.csv"),
            &["Method", "TempC", "TimeH", "Fitted"],
            curves,
        )?);
        written.push(write_csv(
            &dir.join("ti_lines.csv"),
            &["Method", "TempC", "InvKelvin", "Log10Time"],
            lines,
        )?);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tradls::{fit_ls, LsOptions};

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(round_sig(14917.138059818, 6), 14917.1);
        assert_eq!(round_sig(-0.000123456789, 3), -0.000123);
        assert_eq!(round_sig(0.0, 4), 0.0);
    }

    #[test]
    fn ls_block_layout() {
        let fit = fit_ls(&fixtures::adhesive_bond_b(), &LsOptions::default()).unwrap();
        let text = text_ls(&fit);
        assert!(text.contains("-13.7805"));
        assert!(text.contains("5535.0907"));
        assert!(text.contains("est.TI: 22"));
        assert!(text.contains("2063.0924"));
    }

    #[test]
    fn plot_files_have_expected_rows() {
        let ds = fixtures::adhesive_bond_b();
        let fit = fit_ls(&ds, &LsOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = write_plot_data(dir.path(), &ds, Some(&fit), None, None).unwrap();
        assert_eq!(files.len(), 4);
        let curves = std::fs::read_to_string(dir.path().join("fitted_curves.csv")).unwrap();
        assert_eq!(curves.lines().count(), 1 + 3 * PLOT_GRID);
    }
}
