//! Factor tables: ingestion, validation, transforms, row removal and
//! synthetic generation.
//!
//! Row indices are 0-based throughout the library; the CLI converts from
//! and to 1-based numbering at its boundary.

mod csvio;
mod frame;
mod synth;
mod transform;

pub use csvio::{load_csv, write_csv, Schema};
pub use frame::{
    FactorFrame, CANONICAL_COLUMNS, CANONICAL_PREDICTORS, DEFAULT_RESPONSE, PANEL_COLUMN, TERM_COLUMN,
};
pub use synth::{
    synthesize, SynthConfig, DEFAULT_COEFFICIENTS, DEFAULT_NOISE_SD, DEFAULT_OUTLIER_ROWS,
    DEFAULT_OUTLIER_SHIFT_SD,
};
pub use transform::{apply_transform, remove_rows, TransformKind, TransformSpec};
