use serde::{Deserialize, Serialize};

use super::{BoundMethod, Estimate};
use crate::error::{Error, Result};

/// One computed value: what was bounded, by which method, and the witness
/// sets (one per case) as sorted index arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub target: String,
    pub method: String,
    pub value: usize,
    pub certificate: Vec<Vec<usize>>,
}

impl ReportRow {
    pub fn new(target: impl Into<String>, method: &BoundMethod, est: &Estimate) -> Self {
        Self {
            target: target.into(),
            method: method.name().to_string(),
            value: est.value,
            certificate: est
                .certificate
                .iter()
                .map(|c| c.set.as_slice().to_vec())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub curve: String,
    pub rows: Vec<ReportRow>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    target: &'a str,
    method: &'a str,
    value: usize,
    certificate: String,
}

impl BoundReport {
    pub fn new(curve: impl Into<String>) -> Self {
        Self {
            curve: curve.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    /// Columns `target,method,value,certificate`; case sets are separated by
    /// `|`, indices by spaces.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            let certificate = r
                .certificate
                .iter()
                .map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("|");
            w.serialize(CsvRow {
                target: &r.target,
                method: &r.method,
                value: r.value,
                certificate,
            })
            .map_err(|e| Error::Config(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}
