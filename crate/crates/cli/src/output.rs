//! Report serialization: JSON documents everywhere, plus a flat CSV
//! export for sweeps.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use qintersect_core::report::SweepReport;

use crate::CliError;

/// Write `contents` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    let result = match out {
        Some(path) => fs::write(path, contents).map_err(|e| (e, path.display().to_string())),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(contents.as_bytes())
                .map_err(|e| (e, "stdout".to_string()))
        }
    };
    result.map_err(|(e, target)| CliError::Output(format!("cannot write {target}: {e}")))
}

pub fn json_doc<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Output(format!("cannot serialize report: {e}")))
}

/// One CSV row per sweep configuration; baseline cells stay empty when
/// the baseline was not requested.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from(
        "n,num_entries,common_count,iterations,analytic_success,simulated_success,grover_iterations,grover_success\n",
    );
    for row in &report.rows {
        let grover_iterations = row
            .grover_iterations
            .map(|q| q.to_string())
            .unwrap_or_default();
        let grover_success = row
            .grover_success
            .map(|p| p.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.n,
            row.num_entries,
            row.common_count,
            row.iterations,
            row.analytic_success,
            row.simulated_success,
            grover_iterations,
            grover_success
        ));
    }
    out
}
