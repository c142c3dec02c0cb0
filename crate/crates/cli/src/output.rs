//! Deterministic output: number formatting, CSV assembly, and the run
//! manifest. Everything here is locale-free and stable across runs so that
//! repeated runs of the same scenario produce byte-identical CSV files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Full-precision formatting for trajectory-grade data: 17 significant
/// digits in scientific notation, enough to round-trip any `f64` exactly.
pub fn full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Five-significant-digit formatting for summary tables. Values with
/// extreme exponents fall back to scientific notation.
pub fn sig5(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-8..=8).contains(&exp) {
        let decimals = (4 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.4e}")
    }
}

/// Shortest exact representation, used for echoing configured inputs
/// (e.g. the constant `h` column) without re-rounding them.
pub fn exact(v: f64) -> String {
    format!("{v}")
}

/// A CSV file under construction: a fixed header and one line per row.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Self {
            text: format!("{header}\n"),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn into_text(self) -> String {
        self.text
    }
}

/// Writes `contents` to `dir/file_name`, creating the directory if needed,
/// and returns the full path.
pub fn write_file(dir: &Path, file_name: &str, contents: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let path = dir.join(file_name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

/// Tool versions recorded in every manifest.
#[derive(Serialize)]
pub struct Versions {
    pub popdyn: &'static str,
    #[serde(rename = "popdyn-cli")]
    pub popdyn_cli: &'static str,
}

impl Versions {
    pub fn current() -> Self {
        Self {
            popdyn: popdyn::VERSION,
            popdyn_cli: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// Command-line overrides recorded in the manifest.
#[derive(Serialize)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub adjoint_mode: Option<String>,
}

/// The run manifest: inputs, versions, settings, produced files, and
/// result highlights. `runtime_seconds` varies between runs by nature;
/// the CSV artifacts are the byte-stable outputs.
#[derive(Serialize)]
pub struct Manifest<'a> {
    pub scenario: &'a str,
    pub kind: String,
    pub config_path: String,
    pub versions: Versions,
    pub overrides: Overrides,
    /// Echo of the parsed scenario file.
    pub settings: serde_json::Value,
    /// File names written to the output directory (besides this manifest).
    pub outputs: Vec<String>,
    /// Kind-specific result summary.
    pub results: serde_json::Value,
    pub runtime_seconds: f64,
}

impl Manifest<'_> {
    /// Serializes and writes `<scenario>-manifest.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let text =
            serde_json::to_string_pretty(self).expect("manifest serialization cannot fail") + "\n";
        write_file(dir, &format!("{}-manifest.json", self.scenario), &text)
    }
}
