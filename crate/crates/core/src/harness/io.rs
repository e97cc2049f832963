//! Matrix files: `{"m": int, "n": int, "data": [[re, im], ...]}`, row-major
//! over the `(mn)²` entries.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blockops::BlockMatrix;
use crate::matkernel::{Complex64, ComplexMatrix};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {detail}")]
    Invalid { path: PathBuf, detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRecord {
    pub m: usize,
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

pub fn matrix_to_record(a: &BlockMatrix) -> MatrixRecord {
    MatrixRecord {
        m: a.m(),
        n: a.n(),
        data: a.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
    }
}

/// Validates shape and finiteness; the error text names the offending entry.
pub fn matrix_from_record(rec: MatrixRecord) -> Result<BlockMatrix, String> {
    if rec.m == 0 || rec.n == 0 {
        return Err(format!("block shape {}x{} must be positive", rec.m, rec.n));
    }
    let d = rec.m * rec.n;
    if rec.data.len() != d * d {
        return Err(format!(
            "expected {} entries for m = {}, n = {}, found {}",
            d * d,
            rec.m,
            rec.n,
            rec.data.len()
        ));
    }
    if let Some(k) = rec.data.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
        return Err(format!("non-finite entry at ({}, {})", k / d, k % d));
    }
    let data = rec.data.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
    let matrix = ComplexMatrix::new(d, d, data).map_err(|e| e.to_string())?;
    BlockMatrix::new(rec.m, rec.n, matrix).map_err(|e| e.to_string())
}

pub fn save_matrix(path: impl AsRef<Path>, a: &BlockMatrix) -> Result<(), FileError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string(&matrix_to_record(a)).expect("finite entries serialise");
    text.push('\n');
    fs::write(path, text).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<BlockMatrix, FileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_owned(),
        source,
    })?;
    let rec: MatrixRecord = serde_json::from_str(&text).map_err(|e| FileError::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    matrix_from_record(rec).map_err(|detail| FileError::Invalid {
        path: path.to_owned(),
        detail,
    })
}
