//! CSV and JSON encoding. Everything is rendered to bytes first so a run
//! can hash its outputs before writing the manifest.

use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::MeasureInput;
use crate::error::{CliError, CliResult};

/// An in-memory CSV table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| CliError::Internal(e.to_string()))
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Shortest round-trip decimal form; non-finite values as `inf`, `-inf`, `nan`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == 0.0 {
        "0.0".into()
    } else {
        format!("{x:?}")
    }
}

/// Parses what [`fmt_f64`] writes.
pub fn parse_f64(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        t => t.parse().ok(),
    }
}

/// JSON number, or a string for non-finite values (JSON has no infinities).
pub fn num(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(fmt_f64(x)))
}

pub fn json_bytes(v: &Value) -> CliResult<Vec<u8>> {
    let mut b = serde_json::to_vec_pretty(v)?;
    b.push(b'\n');
    Ok(b)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Reads a measure from CSV: header `x,weight` gives atoms, `x` alone
/// uniform atoms, `knot,density` a grid density.
pub fn read_measure_csv(path: &Path) -> CliResult<MeasureInput> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::usage(format!("cannot read measure {}: {e}", path.display())))?;
    let header: Vec<String> = r.headers().map_err(|e| CliError::usage(e.to_string()))?.iter().map(|h| h.trim().to_lowercase()).collect();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::usage(format!("measure row {}: {e}", i + 1)))?;
        if rec.len() != header.len() {
            return Err(CliError::usage(format!("measure row {} has {} fields", i + 1, rec.len())));
        }
        for (c, f) in rec.iter().enumerate() {
            let v = parse_f64(f).filter(|v| v.is_finite()).ok_or_else(|| CliError::usage(format!("measure row {}: `{f}` is not a finite number", i + 1)))?;
            cols[c].push(v);
        }
    }
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    match h.as_slice() {
        ["x"] => {
            let k = cols[0].len();
            Ok(MeasureInput::Atoms { points: cols.remove(0), weights: vec![1.0 / k as f64; k] })
        }
        ["x", "weight"] => {
            let w = cols.remove(1);
            Ok(MeasureInput::Atoms { points: cols.remove(0), weights: w })
        }
        ["knot", "density"] => {
            let v = cols.remove(1);
            Ok(MeasureInput::Grid { knots: cols.remove(0), values: v })
        }
        _ => Err(CliError::usage(format!("measure header must be `x`, `x,weight` or `knot,density`, got {header:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_roundtrips() {
        for x in [0.1, -2.5e-300, 1.0 / 3.0, 1e21, f64::INFINITY, f64::NEG_INFINITY] {
            assert_eq!(parse_f64(&fmt_f64(x)).unwrap(), x);
        }
        assert!(parse_f64("nan").unwrap().is_nan());
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
    }

    #[test]
    fn csv_quotes_fields() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), "1".into()]);
        assert_eq!(t.to_csv().unwrap(), b"a,b\n\"x,y\",1\n");
    }

    #[test]
    fn measure_files() {
        let dir = std::env::temp_dir().join(format!("pradial-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let f = dir.join("m.csv");
        std::fs::write(&f, "x,weight\n0,0.5\n1,0.5\n").unwrap();
        assert_eq!(read_measure_csv(&f).unwrap(), MeasureInput::Atoms { points: vec![0.0, 1.0], weights: vec![0.5, 0.5] });
        std::fs::write(&f, "knot,density\n0,1\n1,1\n").unwrap();
        assert!(matches!(read_measure_csv(&f).unwrap(), MeasureInput::Grid { .. }));
        std::fs::write(&f, "y\n1\n").unwrap();
        assert!(read_measure_csv(&f).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
