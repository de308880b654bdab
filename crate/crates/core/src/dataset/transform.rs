use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::frame::FactorFrame;
use crate::error::{Error, Result};

/// The power-transform ladder offered for linearizing a predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Identity,
    Log,
    Sqrt,
    Square,
}

impl TransformKind {
    pub const LADDER: [TransformKind; 4] = [
        TransformKind::Identity,
        TransformKind::Log,
        TransformKind::Sqrt,
        TransformKind::Square,
    ];

    /// Whether `x` is inside the transform's domain.
    pub fn admits(self, x: f64) -> bool {
        match self {
            TransformKind::Log => x > 0.0,
            TransformKind::Sqrt => x >= 0.0,
            TransformKind::Identity | TransformKind::Square => true,
        }
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            TransformKind::Identity => x,
            TransformKind::Log => x.ln(),
            TransformKind::Sqrt => x.sqrt(),
            TransformKind::Square => x * x,
        }
    }

    /// Transforms a whole column; `Err(i)` names the first row outside the
    /// domain (0-based).
    pub fn apply_column(self, values: &[f64]) -> std::result::Result<Vec<f64>, usize> {
        if let Some(i) = values.iter().position(|&x| !self.admits(x)) {
            return Err(i);
        }
        Ok(values.iter().map(|&x| self.apply(x)).collect())
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransformKind::Identity => "identity",
            TransformKind::Log => "log",
            TransformKind::Sqrt => "sqrt",
            TransformKind::Square => "square",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub column: String,
    pub kind: TransformKind,
}

impl TransformSpec {
    pub fn new(column: impl Into<String>, kind: TransformKind) -> Self {
        Self {
            column: column.into(),
            kind,
        }
    }
}

/// Returns a copy of `frame` with `spec.column` transformed.
pub fn apply_transform(frame: &FactorFrame, spec: &TransformSpec) -> Result<FactorFrame> {
    let values = frame.column(&spec.column)?;
    if spec.kind == TransformKind::Identity {
        return Ok(frame.clone());
    }
    let transformed = spec.kind.apply_column(&values).map_err(|i| Error::TransformDomain {
        row: i + 1,
        column: spec.column.to_lowercase(),
    })?;
    frame.with_column(&spec.column, &transformed)
}

/// Drops the given 0-based rows, keeping the remaining rows in order.
pub fn remove_rows(frame: &FactorFrame, indices: &BTreeSet<usize>) -> Result<FactorFrame> {
    let n = frame.nrows();
    if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    if indices.is_empty() {
        return Ok(frame.clone());
    }
    let keep: Vec<usize> = (0..n).filter(|i| !indices.contains(i)).collect();
    frame.take_rows(&keep)
}
