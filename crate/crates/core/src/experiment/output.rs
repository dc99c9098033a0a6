use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// A CSV record type with a fixed header.
pub trait Row: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub r: usize,
    pub trials: u64,
    pub exceedances: u64,
    pub survival: f64,
    pub stderr: f64,
    pub oracle_tv_bound: Option<f64>,
}

impl Row for RadiusRow {
    const HEADER: &'static [&'static str] = &["r", "trials", "exceedances", "survival", "stderr", "oracle_tv_bound"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingRow {
    pub n: u64,
    pub r: usize,
    pub trials: u64,
    pub disagreements: u64,
    pub phi_hat: f64,
    pub stderr: f64,
}

impl Row for MixingRow {
    const HEADER: &'static [&'static str] = &["n", "r", "trials", "disagreements", "phi_hat", "stderr"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalRow {
    pub n: usize,
    pub trials: u64,
    pub exceedances: u64,
    pub survival: f64,
    pub stderr: f64,
}

impl Row for DiagonalRow {
    const HEADER: &'static [&'static str] = &["n", "trials", "exceedances", "survival", "stderr"];
}

/// `exceedances` counts `T* > 2n`; `order_bound` is `(n + 1) B(n)^2 D^(-n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeRow {
    pub n: usize,
    pub trials: u64,
    pub exceedances: u64,
    pub survival: f64,
    pub stderr: f64,
    pub diagonal_survival: f64,
    pub order_bound: f64,
}

impl Row for SpacetimeRow {
    const HEADER: &'static [&'static str] = &[
        "n",
        "trials",
        "exceedances",
        "survival",
        "stderr",
        "diagonal_survival",
        "order_bound",
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub replica: u64,
    pub horizon: u64,
    pub sweeps: u64,
    pub center_spin: u8,
    /// Interior spins in site order, one digit per site.
    pub interior: String,
}

impl Row for SampleRow {
    const HEADER: &'static [&'static str] = &["replica", "horizon", "sweeps", "center_spin", "interior"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PottsRow {
    pub vertex: usize,
    pub color: u32,
    pub count: u64,
    pub frequency: f64,
    pub oracle: Option<f64>,
}

impl Row for PottsRow {
    const HEADER: &'static [&'static str] = &["vertex", "color", "count", "frequency", "oracle"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateRow {
    pub check: String,
    pub mode: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Row for ValidateRow {
    const HEADER: &'static [&'static str] = &["check", "mode", "value", "tolerance", "pass"];
}

/// CSV text with a header row; floats keep full round-trip precision.
pub fn csv_string<R: Row>(rows: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(R::HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Writes `rows` as CSV to `path`.
pub fn emit_results<R: Row>(rows: &[R], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(rows)?)?;
    Ok(())
}

/// Parses CSV text written by [`csv_string`].
pub fn parse_csv<R: Row>(text: &str) -> Result<Vec<R>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_when_empty() {
        assert_eq!(
            csv_string::<RadiusRow>(&[]).unwrap(),
            "r,trials,exceedances,survival,stderr,oracle_tv_bound\n"
        );
    }

    #[test]
    fn round_trip() {
        let rows = vec![
            RadiusRow {
                r: 0,
                trials: 100,
                exceedances: 7,
                survival: 0.07,
                stderr: 0.025514701644346147,
                oracle_tv_bound: Some(1.0 / 3.0),
            },
            RadiusRow {
                r: 1,
                trials: 100,
                exceedances: 0,
                survival: 0.0,
                stderr: 0.0,
                oracle_tv_bound: None,
            },
        ];
        let text = csv_string(&rows).unwrap();
        assert!(text.contains("0.025514701644346147"));
        assert_eq!(parse_csv::<RadiusRow>(&text).unwrap(), rows);
    }

    #[test]
    fn writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mixing.csv");
        emit_results(&[MixingRow {
            n: 0,
            r: 0,
            trials: 3,
            disagreements: 3,
            phi_hat: 1.0,
            stderr: 0.0,
        }], &path)
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "n,r,trials,disagreements,phi_hat,stderr\n0,0,3,3,1.0,0.0\n");
    }
}
