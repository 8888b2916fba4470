//! Python bindings: `fit` returns the JSON report as a dict, `summary` the
//! text summary.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use addt::cli::{build_report, exit_code, FitArgs, Method, EXIT_CONVERGENCE};
use addt::report::Report;
use addt::{fixtures, AddtError};

fn to_py_err(e: AddtError) -> PyErr {
    if exit_code(&e) == EXIT_CONVERGENCE {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    input: PathBuf,
    method: &str,
    failure_threshold: f64,
    time_rti: f64,
    conf_level: f64,
    semi_cor: bool,
    knots: Option<Vec<f64>>,
    initial_value: Option<f64>,
    subset: Option<String>,
    remap: bool,
) -> PyResult<Report> {
    let method = match method.to_ascii_lowercase().as_str() {
        "ls" => Method::Ls,
        "ml" => Method::Ml,
        "semi" => Method::Semi,
        "all" => Method::All,
        other => {
            return Err(PyValueError::new_err(format!(
                "method must be one of ls, ml, semi, all; got {other:?}"
            )))
        }
    };
    let args = FitArgs {
        method,
        input,
        failure_threshold,
        time_rti,
        conf_level,
        semi_cor,
        knots,
        initial_value,
        subset,
        output: None,
        plot_dir: None,
        keep_partial: false,
        no_remap: !remap,
    };
    let (report, _, mut errors) = build_report(&args).map_err(to_py_err)?;
    if !errors.is_empty() {
        return Err(to_py_err(errors.remove(0)));
    }
    Ok(report)
}

/// Fits the requested methods and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (input, method = "all", failure_threshold = 70.0, time_rti = 100000.0,
    conf_level = 0.95, semi_cor = false, knots = None, initial_value = None, subset = None,
    remap = true))]
#[allow(clippy::too_many_arguments)]
fn fit(
    py: Python<'_>,
    input: PathBuf,
    method: &str,
    failure_threshold: f64,
    time_rti: f64,
    conf_level: f64,
    semi_cor: bool,
    knots: Option<Vec<f64>>,
    initial_value: Option<f64>,
    subset: Option<String>,
    remap: bool,
) -> PyResult<Py<PyAny>> {
    let report = py.detach(|| {
        run(
            input,
            method,
            failure_threshold,
            time_rti,
            conf_level,
            semi_cor,
            knots,
            initial_value,
            subset,
            remap,
        )
    })?;
    let json = report.to_json().map_err(to_py_err)?;
    Ok(py.import("json")?.call_method1("loads", (json,))?.unbind())
}

/// Same arguments as `fit`; returns the printed summary.
#[pyfunction]
#[pyo3(signature = (input, method = "all", failure_threshold = 70.0, time_rti = 100000.0,
    conf_level = 0.95, semi_cor = false, knots = None, initial_value = None, subset = None,
    remap = true))]
#[allow(clippy::too_many_arguments)]
fn summary(
    py: Python<'_>,
    input: PathBuf,
    method: &str,
    failure_threshold: f64,
    time_rti: f64,
    conf_level: f64,
    semi_cor: bool,
    knots: Option<Vec<f64>>,
    initial_value: Option<f64>,
    subset: Option<String>,
    remap: bool,
) -> PyResult<String> {
    py.detach(|| {
        run(
            input,
            method,
            failure_threshold,
            time_rti,
            conf_level,
            semi_cor,
            knots,
            initial_value,
            subset,
            remap,
        )
    })
    .map(|r| r.to_text())
}

/// Names of the known datasets.
#[pyfunction]
fn datasets() -> Vec<&'static str> {
    fixtures::NAMES.to_vec()
}

/// CSV text of a bundled dataset.
#[pyfunction]
fn dataset_csv(name: &str) -> PyResult<String> {
    fixtures::csv_text(name).map_err(to_py_err)
}

#[pymodule]
fn pyaddt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(summary, m)?)?;
    m.add_function(wrap_pyfunction!(datasets, m)?)?;
    m.add_function(wrap_pyfunction!(dataset_csv, m)?)?;
    Ok(())
}
