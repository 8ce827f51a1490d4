//! Sparse term-document matrix files.
//!
//! The counts live in a coordinate-list CSV (`row,col,count`, zero-based);
//! row and column metadata in a JSON sidecar next to it.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use narca_core::text::{ColumnMeta, ColumnRole, RowMeta, RowRole, TermDocMatrix};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const COO_SUFFIX: &str = ".coo.csv";
pub const ROLES_SUFFIX: &str = ".roles.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RowKind {
    Principal,
    Supplementary,
}

#[derive(Debug, Serialize, Deserialize)]
struct RowRecord {
    seq_no: u32,
    role: RowKind,
    campaign: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ColumnRecord {
    label: String,
    /// Set for campaign indicator columns, absent for terms.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    indicator_of: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Sidecar {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<RowRecord>,
    columns: Vec<ColumnRecord>,
    dropped_docs: Vec<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Triplet {
    row: usize,
    col: usize,
    count: u32,
}

/// True if `path` names a coordinate-list matrix file.
pub fn is_matrix_path(path: &Path) -> bool {
    path.to_str().is_some_and(|s| s.ends_with(COO_SUFFIX))
}

pub fn sidecar_path(coo: &Path) -> PathBuf {
    let s = coo.to_string_lossy();
    let stem = s.strip_suffix(COO_SUFFIX).unwrap_or(&s);
    PathBuf::from(format!("{stem}{ROLES_SUFFIX}"))
}

/// Writes `<stem>.coo.csv` and `<stem>.roles.json` into `dir`.
pub fn write_matrix(dir: &Path, stem: &str, m: &TermDocMatrix) -> Result<[PathBuf; 2], CliError> {
    let coo = dir.join(format!("{stem}{COO_SUFFIX}"));
    let mut w = csv::Writer::from_path(&coo).map_err(|e| CliError::data(&coo, e))?;
    for (row, col, count) in m.triplets() {
        w.serialize(Triplet { row, col, count }).map_err(|e| CliError::data(&coo, e))?;
    }
    w.flush().map_err(|e| CliError::io(&coo, e))?;

    let sidecar = Sidecar {
        n_rows: m.n_rows(),
        n_cols: m.n_cols(),
        rows: m
            .rows
            .iter()
            .map(|r| RowRecord {
                seq_no: r.seq_no,
                role: match r.role {
                    RowRole::Principal => RowKind::Principal,
                    RowRole::Supplementary => RowKind::Supplementary,
                },
                campaign: r.campaign,
            })
            .collect(),
        columns: m
            .columns
            .iter()
            .map(|c| ColumnRecord {
                label: c.label.clone(),
                indicator_of: match c.role {
                    ColumnRole::Term => None,
                    ColumnRole::CampaignIndicator(k) => Some(k),
                },
            })
            .collect(),
        dropped_docs: m.dropped_docs.clone(),
    };
    let roles = sidecar_path(&coo);
    write_json(&roles, &sidecar)?;
    Ok([coo, roles])
}

pub fn read_matrix(coo: &Path) -> Result<TermDocMatrix, CliError> {
    let roles = sidecar_path(coo);
    let file = File::open(&roles).map_err(|e| CliError::io(&roles, e))?;
    let sidecar: Sidecar = serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| CliError::data(&roles, e))?;
    if sidecar.rows.len() != sidecar.n_rows || sidecar.columns.len() != sidecar.n_cols {
        return Err(CliError::data(&roles, "row or column count does not match its metadata"));
    }
    let mut entries: Vec<Vec<(usize, u32)>> = vec![Vec::new(); sidecar.n_rows];
    let mut reader = csv::Reader::from_path(coo).map_err(|e| CliError::data(coo, e))?;
    for t in reader.deserialize::<Triplet>() {
        let t = t.map_err(|e| CliError::data(coo, e))?;
        if t.row >= sidecar.n_rows || t.col >= sidecar.n_cols {
            return Err(CliError::data(coo, format!("entry ({}, {}) is out of bounds", t.row, t.col)));
        }
        if t.count > 0 {
            entries[t.row].push((t.col, t.count));
        }
    }
    for e in &mut entries {
        e.sort_unstable();
        if e.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(CliError::data(coo, "duplicate entry"));
        }
    }
    Ok(TermDocMatrix {
        rows: sidecar
            .rows
            .into_iter()
            .map(|r| RowMeta {
                seq_no: r.seq_no,
                role: match r.role {
                    RowKind::Principal => RowRole::Principal,
                    RowKind::Supplementary => RowRole::Supplementary,
                },
                campaign: r.campaign,
            })
            .collect(),
        columns: sidecar
            .columns
            .into_iter()
            .map(|c| ColumnMeta {
                label: c.label,
                role: c.indicator_of.map_or(ColumnRole::Term, ColumnRole::CampaignIndicator),
            })
            .collect(),
        entries,
        dropped_docs: sidecar.dropped_docs,
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::data(path, e))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}
