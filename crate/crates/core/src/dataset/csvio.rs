//! CSV ingestion and emission.
//!
//! Input: UTF-8, comma-separated, header row, dot decimal separator, LF or
//! CRLF line endings. Header matching is case-insensitive. Data rows are
//! numbered from 1 in error messages (the header is not counted).

use std::io::{Read, Write};

use super::frame::{canonical_rank, FactorFrame, CANONICAL_COLUMNS, DEFAULT_RESPONSE, PANEL_COLUMN, TERM_COLUMN};
use crate::error::{Error, Result};
use crate::numkernel::DenseMatrix;

/// Columns a CSV source must provide.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub required: Vec<String>,
    pub response: String,
    pub term: String,
    pub panel: String,
}

impl Schema {
    /// term, panel, dta, roe, roa, tato, cr, price.
    pub fn canonical() -> Self {
        Self {
            required: CANONICAL_COLUMNS.iter().map(|s| s.to_string()).collect(),
            response: DEFAULT_RESPONSE.into(),
            term: TERM_COLUMN.into(),
            panel: PANEL_COLUMN.into(),
        }
    }

    /// Only the response and the term/panel bookkeeping columns.
    pub fn minimal(response: &str) -> Self {
        Self {
            required: Vec::new(),
            response: response.to_lowercase(),
            term: TERM_COLUMN.into(),
            panel: PANEL_COLUMN.into(),
        }
    }

    fn all_required(&self) -> Vec<String> {
        let mut out: Vec<String> = self.required.iter().map(|s| s.to_lowercase()).collect();
        for extra in [&self.response, &self.term, &self.panel] {
            let e = extra.to_lowercase();
            if !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na")
}

pub fn load_csv<R: Read>(source: R, schema: &Schema) -> Result<FactorFrame> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header: Vec<String> = reader.headers()?.iter().map(|h| h.to_lowercase()).collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(Error::EmptyInput);
    }
    for required in schema.all_required() {
        if !header.contains(&required) {
            return Err(Error::Schema(required));
        }
    }

    let term_idx = header.iter().position(|h| *h == schema.term.to_lowercase());
    let mut data = Vec::new();
    let mut rows = 0usize;
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let row = r + 1;
        // a blank line shows up as a single empty field
        if record.len() == 1 && record.get(0) == Some("") && header.len() > 1 {
            continue;
        }
        if record.len() > header.len() {
            return Err(Error::Parse {
                row,
                column: format!("field {}", header.len() + 1),
                value: record.get(header.len()).unwrap_or_default().to_string(),
            });
        }
        for (j, column) in header.iter().enumerate() {
            let cell = record.get(j).unwrap_or("");
            if is_missing(cell) {
                return Err(Error::MissingValue {
                    row,
                    column: column.clone(),
                });
            }
            let value: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| Error::Parse {
                row,
                column: column.clone(),
                value: cell.to_string(),
            })?;
            if Some(j) == term_idx && (value < 0.0 || value.fract() != 0.0) {
                return Err(Error::Parse {
                    row,
                    column: column.clone(),
                    value: cell.to_string(),
                });
            }
            data.push(value);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::EmptyInput);
    }
    let values = DenseMatrix::new(rows, header.len(), data)?;
    FactorFrame::new(header, values, &schema.response, &schema.term, &schema.panel)
}

/// Writes the frame with an LF-terminated header in canonical order and
/// shortest round-trip decimal values.
pub fn write_csv<W: Write>(frame: &FactorFrame, mut sink: W) -> Result<()> {
    let mut order: Vec<usize> = (0..frame.ncols()).collect();
    order.sort_by_key(|&j| canonical_rank(&frame.column_names()[j]));
    let header: Vec<&str> = order.iter().map(|&j| frame.column_names()[j].as_str()).collect();
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    let values = frame.values();
    for i in 0..frame.nrows() {
        let row = values.row(i);
        let cells: Vec<String> = order.iter().map(|&j| format!("{}", row[j])).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "term,panel,dta,roe,roa,tato,cr,price\n\
        1,1,0.4,0.2,0.1,0.9,1.5,2500\n\
        2,1,0.41,0.21,0.11,0.95,1.4,2550.5\n\
        3,1,0.42,0.19,0.1,1.0,1.6,2490\n";

    #[test]
    fn loads_well_formed_input() {
        let f = load_csv(GOOD.as_bytes(), &Schema::canonical()).unwrap();
        assert_eq!(f.nrows(), 3);
        assert_eq!(f.ncols(), 8);
        assert_eq!(f.column("price").unwrap(), vec![2500.0, 2550.5, 2490.0]);
    }

    #[test]
    fn header_is_case_insensitive_and_crlf_accepted() {
        let src = "TERM,Panel,Price\r\n1,2,3.5\r\n2,2,4\r\n";
        let f = load_csv(src.as_bytes(), &Schema::minimal("price")).unwrap();
        assert_eq!(f.column("price").unwrap(), vec![3.5, 4.0]);
    }

    #[test]
    fn missing_cell_is_reported_with_row_and_column() {
        let src = "term,panel,dta,roe,roa,tato,cr,price\n1,1,0.4,0.2,0.1,0.9,1.5,2500\n2,1,,0.2,0.1,0.9,1.5,2500\n";
        let err = load_csv(src.as_bytes(), &Schema::canonical()).unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 2, ref column } if column == "dta"), "{err}");
    }

    #[test]
    fn short_row_is_missing_value() {
        let src = "term,panel,price\n1,1\n";
        let err = load_csv(src.as_bytes(), &Schema::minimal("price")).unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 1, ref column } if column == "price"));
    }

    #[test]
    fn missing_schema_column() {
        let src = "term,panel,dta,roe,roa,cr,price\n1,1,0.4,0.2,0.1,1.5,2500\n";
        let err = load_csv(src.as_bytes(), &Schema::canonical()).unwrap_err();
        assert!(matches!(err, Error::Schema(ref c) if c == "tato"));
    }

    #[test]
    fn parse_errors() {
        let src = "term,panel,price\n1,1,abc\n";
        let err = load_csv(src.as_bytes(), &Schema::minimal("price")).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, ref column, .. } if column == "price"));
        // comma decimal separators are not numbers
        let src = "term,panel,price\n1,1,\"2,5\"\n";
        assert!(matches!(load_csv(src.as_bytes(), &Schema::minimal("price")), Err(Error::Parse { .. })));
        // fractional or negative quarter index
        let src = "term,panel,price\n1.5,1,2\n";
        assert!(matches!(load_csv(src.as_bytes(), &Schema::minimal("price")), Err(Error::Parse { .. })));
        let src = "term,panel,price\n1,1,inf\n";
        assert!(matches!(load_csv(src.as_bytes(), &Schema::minimal("price")), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(load_csv("".as_bytes(), &Schema::canonical()), Err(Error::EmptyInput)));
        let header_only = "term,panel,dta,roe,roa,tato,cr,price\n";
        assert!(matches!(load_csv(header_only.as_bytes(), &Schema::canonical()), Err(Error::EmptyInput)));
    }

    #[test]
    fn write_emits_canonical_header_and_lf() {
        let f = load_csv("price,panel,term,zeta\n3.25,1,2,0.1\n".as_bytes(), &Schema::minimal("price")).unwrap();
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "term,panel,price,zeta\n2,1,3.25,0.1\n");
    }

    #[test]
    fn round_trip_is_value_exact() {
        let src = "term,panel,price\n1,1,0.1\n2,1,1e-300\n3,2,123456789.123456789\n4,2,-0.3333333333333333\n";
        let f = load_csv(src.as_bytes(), &Schema::minimal("price")).unwrap();
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        let g = load_csv(buf.as_slice(), &Schema::minimal("price")).unwrap();
        assert_eq!(f, g);
    }
}
