use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

/// Canonical column order: quarter index, company code, the five
/// fundamentals, and the closing price.
pub const CANONICAL_COLUMNS: [&str; 8] = ["term", "panel", "dta", "roe", "roa", "tato", "cr", "price"];
pub const CANONICAL_PREDICTORS: [&str; 7] = ["term", "panel", "dta", "roe", "roa", "tato", "cr"];
pub const DEFAULT_RESPONSE: &str = "price";
pub const TERM_COLUMN: &str = "term";
pub const PANEL_COLUMN: &str = "panel";

/// Rectangular table of factor observations.
///
/// Column names are stored lower-case and ordered with the canonical
/// columns first (in [`CANONICAL_COLUMNS`] order) followed by any other
/// columns in the order they were supplied. Frames are immutable; every
/// operation returns a new frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorFrame {
    column_names: Vec<String>,
    values: DenseMatrix,
    response_name: String,
    term_column: String,
    panel_column: String,
}

pub(crate) fn canonical_rank(name: &str) -> usize {
    CANONICAL_COLUMNS
        .iter()
        .position(|c| *c == name)
        .unwrap_or(CANONICAL_COLUMNS.len())
}

impl FactorFrame {
    pub fn new(
        column_names: Vec<String>,
        values: DenseMatrix,
        response_name: &str,
        term_column: &str,
        panel_column: &str,
    ) -> Result<Self> {
        if values.cols() != column_names.len() {
            return Err(Error::DimensionMismatch {
                expected: column_names.len(),
                found: values.cols(),
            });
        }
        if values.rows() == 0 {
            return Err(Error::EmptyInput);
        }
        let names: Vec<String> = column_names.iter().map(|n| n.trim().to_lowercase()).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateColumn(n.clone()));
            }
        }
        let response_name = response_name.to_lowercase();
        let term_column = term_column.to_lowercase();
        let panel_column = panel_column.to_lowercase();
        for required in [&response_name, &term_column, &panel_column] {
            if !seen.contains(required.as_str()) {
                return Err(Error::Schema(required.clone()));
            }
        }

        // stable sort keeps non-canonical columns in supplied order
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by_key(|&j| canonical_rank(&names[j]));
        let column_names = order.iter().map(|&j| names[j].clone()).collect();
        let values = values.select_columns(&order);

        Ok(Self {
            column_names,
            values,
            response_name,
            term_column,
            panel_column,
        })
    }

    pub fn from_columns(
        columns: Vec<(String, Vec<f64>)>,
        response_name: &str,
        term_column: &str,
        panel_column: &str,
    ) -> Result<Self> {
        let (names, cols): (Vec<String>, Vec<Vec<f64>>) = columns.into_iter().unzip();
        let values = DenseMatrix::from_columns(&cols)?;
        Self::new(names, values, response_name, term_column, panel_column)
    }

    pub fn nrows(&self) -> usize {
        self.values.rows()
    }

    pub fn ncols(&self) -> usize {
        self.values.cols()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn response_name(&self) -> &str {
        &self.response_name
    }

    pub fn term_column(&self) -> &str {
        &self.term_column
    }

    pub fn panel_column(&self) -> &str {
        &self.panel_column
    }

    pub fn values(&self) -> &DenseMatrix {
        &self.values
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.column_index(name).is_ok()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        let key = name.trim().to_lowercase();
        self.column_names
            .iter()
            .position(|c| *c == key)
            .ok_or(Error::UnknownColumn(key))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        Ok(self.values.column(self.column_index(name)?))
    }

    /// Every column except the response, in frame order.
    pub fn predictor_names(&self) -> Vec<String> {
        self.column_names
            .iter()
            .filter(|c| **c != self.response_name)
            .cloned()
            .collect()
    }

    /// n×p matrix of the named columns, in the order given.
    pub fn design<S: AsRef<str>>(&self, columns: &[S]) -> Result<DenseMatrix> {
        let idx = columns
            .iter()
            .map(|c| self.column_index(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.values.select_columns(&idx))
    }

    /// Frame restricted to the given rows (0-based), in the order given.
    pub fn take_rows(&self, indices: &[usize]) -> Result<FactorFrame> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.nrows()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.nrows(),
            });
        }
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(FactorFrame {
            values: self.values.select_rows(indices),
            ..self.clone()
        })
    }

    /// Copy with one column's values replaced.
    pub fn with_column(&self, name: &str, values: &[f64]) -> Result<FactorFrame> {
        let j = self.column_index(name)?;
        let mut out = self.clone();
        out.values.replace_column(j, values)?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(names: &[&str], n: usize) -> Vec<(String, Vec<f64>)> {
        names
            .iter()
            .enumerate()
            .map(|(j, name)| (name.to_string(), (0..n).map(|i| (i * 10 + j) as f64).collect()))
            .collect()
    }

    #[test]
    fn canonical_columns_are_ordered_first() {
        let f = FactorFrame::from_columns(cols(&["extra", "PRICE", "cr", "Term", "panel"], 3), "price", "term", "panel")
            .unwrap();
        assert_eq!(f.column_names(), &["term", "panel", "cr", "price", "extra"]);
        assert_eq!(f.column("extra").unwrap(), vec![0.0, 10.0, 20.0]);
        assert_eq!(f.column("TERM").unwrap(), vec![3.0, 13.0, 23.0]);
        assert_eq!(f.predictor_names(), vec!["term", "panel", "cr", "extra"]);
    }

    #[test]
    fn required_columns_enforced() {
        let err = FactorFrame::from_columns(cols(&["term", "panel"], 2), "price", "term", "panel").unwrap_err();
        assert!(matches!(err, Error::Schema(c) if c == "price"));
        let err = FactorFrame::from_columns(cols(&["term", "panel", "price", "Price"], 2), "price", "term", "panel")
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateColumn(_)));
    }

    #[test]
    fn take_rows_validates() {
        let f = FactorFrame::from_columns(cols(&["term", "panel", "price"], 4), "price", "term", "panel").unwrap();
        assert_eq!(f.take_rows(&[3, 0]).unwrap().column("term").unwrap(), vec![30.0, 0.0]);
        assert!(matches!(f.take_rows(&[4]), Err(Error::IndexOutOfRange { index: 4, len: 4 })));
        assert!(f.take_rows(&[]).is_err());
    }
}
