use serde::{Deserialize, Serialize};

use super::correlation::pearson;
use crate::dataset::{FactorFrame, TransformKind, TransformSpec};
use crate::error::{Error, Result};

/// A candidate must beat the incumbent R² by more than this to win.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderStep {
    pub kind: TransformKind,
    /// Simple-regression R²; `None` when the transform was skipped (domain
    /// violation or constant result).
    pub r_squared: Option<f64>,
}

/// R² of `response ~ kind(predictor)` for each rung of the ladder.
pub fn tukey_ladder(frame: &FactorFrame, predictor: &str, response: &str) -> Result<Vec<LadderStep>> {
    let x = frame.column(predictor)?;
    let y = frame.column(response)?;
    if x.iter().all(|v| *v == x[0]) {
        return Err(Error::ConstantPredictor(predictor.to_lowercase()));
    }
    Ok(TransformKind::LADDER
        .iter()
        .map(|&kind| {
            let r_squared = kind
                .apply_column(&x)
                .ok()
                .and_then(|tx| pearson(&tx, &y))
                .map(|r| r * r);
            LadderStep { kind, r_squared }
        })
        .collect())
}

/// Ladder rung with the highest simple-regression R²; ties go to the
/// earlier rung, so identity wins unless something is strictly better.
pub fn tukey_suggest(frame: &FactorFrame, predictor: &str, response: &str) -> Result<TransformSpec> {
    let steps = tukey_ladder(frame, predictor, response)?;
    Ok(TransformSpec::new(predictor.to_lowercase(), best_rung(&steps)))
}

pub(crate) fn best_rung(steps: &[LadderStep]) -> TransformKind {
    let mut best = (TransformKind::Identity, f64::NEG_INFINITY);
    for step in steps {
        if let Some(r2) = step.r_squared {
            if r2 > best.1 + TIE_TOLERANCE {
                best = (step.kind, r2);
            }
        }
    }
    best.0
}
