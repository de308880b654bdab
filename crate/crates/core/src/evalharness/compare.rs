use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::student_t_p_two_sided;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    A,
    B,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedTTest {
    /// `None` when the differences are constant and nonzero (t = ±∞).
    pub t_stat: Option<f64>,
    pub p_value: f64,
    pub df: usize,
    pub mean_difference: f64,
    pub sd_difference: f64,
    pub winner: Winner,
}

impl PairedTTest {
    pub fn t_value(&self) -> f64 {
        self.t_stat
            .unwrap_or(self.mean_difference.signum() * f64::INFINITY)
    }
}

/// Paired t-test on d = a − b. The model with the lower mean error wins
/// when p < `alpha`.
///
/// Constant nonzero differences give t = ±∞ and p = 0; identical inputs
/// give t = 0 and p = 1.
pub fn paired_t_test(errors_a: &[f64], errors_b: &[f64], alpha: f64) -> Result<PairedTTest> {
    if errors_a.len() != errors_b.len() {
        return Err(Error::DimensionMismatch {
            expected: errors_a.len(),
            found: errors_b.len(),
        });
    }
    let n = errors_a.len();
    if n < 2 {
        return Err(Error::InsufficientRows { rows: n, required: 2 });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ConfigInvalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let d: Vec<f64> = errors_a.iter().zip(errors_b).map(|(a, b)| a - b).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    let df = n - 1;
    let constant = d.iter().all(|x| *x == d[0]);

    let (t_stat, p_value) = if constant && d[0] == 0.0 {
        (Some(0.0), 1.0)
    } else if constant || sd == 0.0 {
        (None, 0.0)
    } else {
        let t = mean / (sd / (n as f64).sqrt());
        (Some(t), student_t_p_two_sided(t, df as f64)?)
    };
    let winner = if p_value < alpha && mean != 0.0 {
        if mean > 0.0 {
            Winner::B
        } else {
            Winner::A
        }
    } else {
        Winner::Tie
    };
    Ok(PairedTTest {
        t_stat,
        p_value,
        df,
        mean_difference: mean,
        sd_difference: sd,
        winner,
    })
}
