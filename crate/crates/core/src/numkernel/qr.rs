//! Householder QR factorization and least-squares solves.
//!
//! The factor is kept around after solving so callers can form the
//! unscaled coefficient covariance diag((XᵀX)⁻¹) = diag(R⁻¹R⁻ᵀ) and the
//! hat-matrix diagonal ‖Qᵢ‖² without ever building XᵀX.

use super::matrix::{dot, DenseMatrix};
use super::NumError;

/// |R_kk| at or below this fraction of max |R_jj| marks column k dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct QrDecomposition {
    n: usize,
    p: usize,
    /// Householder vectors; `vectors[k]` acts on rows k..n.
    vectors: Vec<Vec<f64>>,
    taus: Vec<f64>,
    r: DenseMatrix,
}

impl QrDecomposition {
    /// Factors `x` (n×p, n ≥ p ≥ 1) and checks numerical column rank.
    pub fn factor(x: &DenseMatrix) -> Result<Self, NumError> {
        let (n, p) = (x.rows(), x.cols());
        if p == 0 || n < p {
            return Err(NumError::Shape { rows: n, cols: p });
        }
        let mut a = x.clone();
        let mut vectors = Vec::with_capacity(p);
        let mut taus = Vec::with_capacity(p);
        let mut rdiag = vec![0.0; p];

        for k in 0..p {
            let norm = (k..n).map(|i| a.get(i, k).powi(2)).sum::<f64>().sqrt();
            if norm == 0.0 {
                vectors.push(vec![0.0; n - k]);
                taus.push(0.0);
                continue;
            }
            let akk = a.get(k, k);
            let alpha = if akk > 0.0 { -norm } else { norm };
            let mut v: Vec<f64> = (k..n).map(|i| a.get(i, k)).collect();
            v[0] -= alpha;
            let vnorm2 = dot(&v, &v);
            let tau = if vnorm2 > 0.0 { 2.0 / vnorm2 } else { 0.0 };
            rdiag[k] = alpha;
            for j in (k + 1)..p {
                let s: f64 = v.iter().enumerate().map(|(t, vt)| vt * a.get(k + t, j)).sum();
                let scale = tau * s;
                for (t, vt) in v.iter().enumerate() {
                    let cur = a.get(k + t, j);
                    a.set(k + t, j, cur - scale * vt);
                }
            }
            vectors.push(v);
            taus.push(tau);
        }

        let max_diag = rdiag.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        if let Some(k) = rdiag
            .iter()
            .position(|d| max_diag == 0.0 || d.abs() <= RANK_TOLERANCE * max_diag)
        {
            return Err(NumError::RankDeficient { column: k });
        }

        let mut r = DenseMatrix::zeros(p, p);
        for k in 0..p {
            r.set(k, k, rdiag[k]);
            for j in (k + 1)..p {
                r.set(k, j, a.get(k, j));
            }
        }
        Ok(Self {
            n,
            p,
            vectors,
            taus,
            r,
        })
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.p
    }

    /// Upper-triangular p×p factor.
    pub fn r(&self) -> &DenseMatrix {
        &self.r
    }

    /// Qᵀy.
    pub fn apply_qt(&self, y: &[f64]) -> Result<Vec<f64>, NumError> {
        if y.len() != self.n {
            return Err(NumError::DimensionMismatch {
                expected: self.n,
                found: y.len(),
            });
        }
        let mut out = y.to_vec();
        for (k, (v, &tau)) in self.vectors.iter().zip(&self.taus).enumerate() {
            let s = dot(v, &out[k..]);
            for (o, vt) in out[k..].iter_mut().zip(v) {
                *o -= tau * s * vt;
            }
        }
        Ok(out)
    }

    /// Least-squares coefficients minimizing ‖y − Xβ‖².
    pub fn solve(&self, y: &[f64]) -> Result<Vec<f64>, NumError> {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(NumError::NonFinite);
        }
        let qty = self.apply_qt(y)?;
        Ok(self.back_substitute(&qty[..self.p]))
    }

    fn back_substitute(&self, rhs: &[f64]) -> Vec<f64> {
        let p = self.p;
        let mut x = vec![0.0; p];
        for k in (0..p).rev() {
            let mut s = rhs[k];
            for j in (k + 1)..p {
                s -= self.r.get(k, j) * x[j];
            }
            x[k] = s / self.r.get(k, k);
        }
        x
    }

    /// R⁻¹ (upper triangular).
    pub fn r_inverse(&self) -> DenseMatrix {
        let p = self.p;
        let mut inv = DenseMatrix::zeros(p, p);
        for col in 0..p {
            for k in (0..=col).rev() {
                let mut s = if k == col { 1.0 } else { 0.0 };
                for j in (k + 1)..=col {
                    s -= self.r.get(k, j) * inv.get(j, col);
                }
                inv.set(k, col, s / self.r.get(k, k));
            }
        }
        inv
    }

    /// diag((XᵀX)⁻¹), as squared row norms of R⁻¹.
    pub fn unscaled_variances(&self) -> Vec<f64> {
        let inv = self.r_inverse();
        (0..self.p)
            .map(|i| inv.row(i).iter().map(|v| v * v).sum())
            .collect()
    }

    /// Thin orthonormal factor Q (n×p).
    pub fn thin_q(&self) -> DenseMatrix {
        let (n, p) = (self.n, self.p);
        let mut q = DenseMatrix::zeros(n, p);
        for j in 0..p {
            q.set(j, j, 1.0);
        }
        for k in (0..p).rev() {
            let v = &self.vectors[k];
            let tau = self.taus[k];
            for j in 0..p {
                let s: f64 = v.iter().enumerate().map(|(t, vt)| vt * q.get(k + t, j)).sum();
                for (t, vt) in v.iter().enumerate() {
                    let cur = q.get(k + t, j);
                    q.set(k + t, j, cur - tau * s * vt);
                }
            }
        }
        q
    }

    /// Hat-matrix diagonal hᵢᵢ = ‖row i of Q‖².
    pub fn leverage(&self) -> Vec<f64> {
        let q = self.thin_q();
        (0..self.n)
            .map(|i| q.row(i).iter().map(|v| v * v).sum())
            .collect()
    }
}

/// Least-squares solution together with the factor that produced it.
#[derive(Debug, Clone)]
pub struct LeastSquaresSolution {
    pub coefficients: Vec<f64>,
    pub factor: QrDecomposition,
}

/// Solves min ‖y − Xβ‖² by Householder QR.
pub fn qr_least_squares(x: &DenseMatrix, y: &[f64]) -> Result<LeastSquaresSolution, NumError> {
    if y.len() != x.rows() {
        return Err(NumError::DimensionMismatch {
            expected: x.rows(),
            found: y.len(),
        });
    }
    let factor = QrDecomposition::factor(x)?;
    let coefficients = factor.solve(y)?;
    Ok(LeastSquaresSolution {
        coefficients,
        factor,
    })
}
