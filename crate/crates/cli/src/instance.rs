//! Instance file schema: a JSON document listing the input width, the
//! database count, and each database's label and solution indices.
//!
//! ```json
//! {
//!   "n": 2,
//!   "kappa": 2,
//!   "databases": [
//!     { "label": "A", "solutions": [1, 3] },
//!     { "label": "B", "solutions": [2, 3] }
//!   ]
//! }
//! ```

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use qintersect_core::oracle::{BlackBox, ProblemInstance};
use qintersect_core::Error as CoreError;

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub kappa: usize,
    pub databases: Vec<DatabaseEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatabaseEntry {
    pub label: String,
    pub solutions: Vec<u64>,
}

pub fn load(path: &Path) -> Result<ProblemInstance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if file.kappa != file.databases.len() {
        return Err(CliError::Parse(format!(
            "{}: kappa is {} but {} databases are listed",
            path.display(),
            file.kappa,
            file.databases.len()
        )));
    }
    let boxes = file
        .databases
        .into_iter()
        .map(|d| BlackBox::new(file.n, d.label, d.solutions))
        .collect::<Result<Vec<_>, _>>()
        .map_err(schema_error)?;
    ProblemInstance::new(boxes).map_err(schema_error)
}

/// Domain errors raised while building the instance are schema
/// violations; capacity errors keep their own exit code.
fn schema_error(err: CoreError) -> CliError {
    match err {
        CoreError::Capacity { .. } => CliError::Core(err),
        other => CliError::Parse(other.to_string()),
    }
}
