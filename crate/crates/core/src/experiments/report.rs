use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{Conjecture1Trial, ExperimentReport};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Schema(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Reads a report, refusing files from another schema version.
pub fn read_report(path: &Path) -> Result<ExperimentReport> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Schema(format!("{}: not JSON: {e}", path.display())))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        Some(v) => {
            return Err(Error::Schema(format!(
                "{}: schema_version {v}, expected {SCHEMA_VERSION}",
                path.display()
            )))
        }
        None => {
            return Err(Error::Schema(format!(
                "{}: missing schema_version",
                path.display()
            )))
        }
    }
    serde_json::from_value(value).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct QuotientRow {
    trial: usize,
    root_index: usize,
    circle_index: usize,
    quotient: f64,
}

/// Per-trial extremes as CSV rows: the minimum row then the maximum row.
pub fn write_quotient_csv(trials: &[Conjecture1Trial], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for t in trials {
        for e in [t.min, t.max].into_iter().flatten() {
            w.serialize(QuotientRow {
                trial: t.trial,
                root_index: e.root_index,
                circle_index: e.circle_index,
                quotient: e.quotient,
            })?;
        }
    }
    w.flush().map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::super::{conjecture1_experiment, TrialEnsembleConfig};
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let r = conjecture1_experiment(&TrialEnsembleConfig::new(6, 8, 3)).unwrap();
        write_report(&r, &path).unwrap();
        assert_eq!(read_report(&path).unwrap(), r);
        assert!(fs::read_to_string(&path).unwrap().ends_with("}\n"));
    }

    #[test]
    fn schema_mismatch_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        fs::write(&path, "{\"schema_version\": 99}").unwrap();
        assert!(matches!(read_report(&path), Err(Error::Schema(_))));
        fs::write(&path, "{\"kind\": \"c1\"}").unwrap();
        assert!(matches!(read_report(&path), Err(Error::Schema(_))));
        assert!(matches!(
            read_report(&dir.path().join("missing.json")),
            Err(Error::Io { .. })
        ));
    }
}
