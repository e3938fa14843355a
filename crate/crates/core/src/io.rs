//! The shared JSON matrix format:
//! `{"dim": n, "entries": [[[re, im], …], …]}`, rows first. Corner operators
//! carry two extra fields, `base_dim` and `order`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{OpError, Result};
use crate::operator::{c, Operator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

impl MatrixFile {
    pub fn from_operator(op: &Operator) -> Self {
        let dim = op.dim();
        let entries = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|col| {
                        let z = op.get(r, col);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self {
            dim,
            entries,
            base_dim: None,
            order: None,
        }
    }

    pub fn to_operator(&self) -> Result<Operator> {
        if self.entries.len() != self.dim {
            return Err(OpError::InvalidMatrix(format!(
                "dim is {} but entries has {} rows",
                self.dim,
                self.entries.len()
            )));
        }
        let mut data = Vec::with_capacity(self.dim * self.dim);
        for (r, row) in self.entries.iter().enumerate() {
            if row.len() != self.dim {
                return Err(OpError::InvalidMatrix(format!(
                    "row {r} has {} entries, expected {}",
                    row.len(),
                    self.dim
                )));
            }
            data.extend(row.iter().map(|&[re, im]| c(re, im)));
        }
        if let (Some(base), Some(order)) = (self.base_dim, self.order) {
            if base * (order + 1) != self.dim {
                return Err(OpError::InvalidMatrix(format!(
                    "base_dim {base} and order {order} imply dimension {}, found {}",
                    base * (order + 1),
                    self.dim
                )));
            }
        }
        Operator::from_row_slice(self.dim, &data)
    }
}

pub fn read_operator(path: impl AsRef<Path>) -> Result<Operator> {
    read_matrix_file(path)?.to_operator()
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<MatrixFile> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_matrix_file(path: impl AsRef<Path>, file: &MatrixFile) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(file)?)?;
    Ok(())
}

pub fn write_operator(path: impl AsRef<Path>, op: &Operator) -> Result<()> {
    write_matrix_file(path, &MatrixFile::from_operator(op))
}
