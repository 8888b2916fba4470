//! Bundled public ADDT datasets.
//!
//! Adhesive Bond B (Escobar et al. 2003) and Seal Strength (Li and
//! Doganaksoy 2014) are compiled in. Polymer Y and Adhesive Formulation K are
//! recognised names but must be supplied as `<name>.csv` in the directory
//! named by `ADDT_FIXTURE_DIR`, which also overrides the bundled files.

use std::path::PathBuf;

use crate::dataset::DegradationDataset;
use crate::error::{AddtError, Result};

pub const FIXTURE_DIR_ENV: &str = "ADDT_FIXTURE_DIR";

pub const NAMES: [&str; 4] = [
    "adhesive-bond-b",
    "seal-strength",
    "polymer-y",
    "adhesive-formulation-k",
];

const ADHESIVE_BOND_B: &str = include_str!("../fixtures/adhesive-bond-b.csv");
const SEAL_STRENGTH: &str = include_str!("../fixtures/seal-strength.csv");

fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "adhesive-bond-b" => Some(ADHESIVE_BOND_B),
        "seal-strength" => Some(SEAL_STRENGTH),
        _ => None,
    }
}

/// Raw CSV text of a named dataset.
pub fn csv_text(name: &str) -> Result<String> {
    if !NAMES.contains(&name) {
        return Err(AddtError::UnknownDataset {
            name: name.to_string(),
            choices: NAMES.join(", "),
        });
    }
    if let Some(dir) = std::env::var_os(FIXTURE_DIR_ENV) {
        let path = PathBuf::from(dir).join(format!("{name}.csv"));
        if path.is_file() {
            return std::fs::read_to_string(&path).map_err(|source| AddtError::Io { path, source });
        }
    }
    bundled(name).map(str::to_string).ok_or_else(|| {
        AddtError::InvalidArgument(format!(
            "dataset {name:?} is not bundled; place {name}.csv in ${FIXTURE_DIR_ENV}"
        ))
    })
}

pub fn load(name: &str) -> Result<DegradationDataset> {
    DegradationDataset::from_csv_str(&csv_text(name)?)
}

pub fn adhesive_bond_b() -> DegradationDataset {
    DegradationDataset::from_csv_str(ADHESIVE_BOND_B).expect("bundled fixture is valid")
}

/// Seal Strength as tabulated, with the time-0 rows at 100 °C.
pub fn seal_strength() -> DegradationDataset {
    DegradationDataset::from_csv_str(SEAL_STRENGTH).expect("bundled fixture is valid")
}
