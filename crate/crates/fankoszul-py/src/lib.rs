//! Python bindings: the CLI reports as JSON strings.

use clap::Parser;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fankoszul::cli_reports::{error_json, exit_code, run as run_config, RunConfig};

/// Runs one `fankoszul` command and returns `(exit_code, json)`.
pub fn run_args(args: &[String]) -> Result<(i32, String), String> {
    let argv = std::iter::once("fankoszul".to_string()).chain(args.iter().cloned()).chain(["--format".into(), "json".into()]);
    let config = RunConfig::try_parse_from(argv).map_err(|e| e.to_string())?;
    Ok(match run_config(&config) {
        Ok(r) => (if r.pass { 0 } else { 1 }, r.to_json()),
        Err(e) => (exit_code(&e), error_json(&e)),
    })
}

/// `run(["verify", "cech", "--fan", "fx1"])` gives `(exit_code, report_json)`.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<(i32, String)> {
    run_args(&args).map_err(PyValueError::new_err)
}

/// JSON report of `ic table` for a fan file or a built-in fixture name.
#[pyfunction]
fn ic_table(fan: String) -> PyResult<String> {
    run_args(&["ic".into(), "table".into(), "--fan".into(), fan]).map(|(_, s)| s).map_err(PyValueError::new_err)
}

#[pymodule]
fn fankoszul_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(ic_table, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_a_command() {
        let (code, json) = run_args(&["fan".into(), "dual".into(), "--fan".into(), "fx1".into()]).unwrap();
        assert_eq!(code, 0);
        assert!(json.contains("\"rays\""));
        assert!(run_args(&["nonsense".into()]).is_err());
    }
}
