//! Banded symmetric positive-definite factorizations.

use crate::error::{Error, Result};

/// Cholesky factor of an SPD matrix with half-bandwidth `bw`.
///
/// Row `i` of the factor is stored as `L[i][i-bw..=i]`, left-padded with zeros.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    /// Factor from lower-band entries: `entry(i, k)` returns `A[i][i-k]` for `k = 0..=bw`.
    pub fn factor(n: usize, bw: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            for k in 0..=bw.min(i) {
                l[i * w + bw - k] = entry(i, k);
            }
        }
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                // L[i][j] = (A[i][j] - Σ_{m<j} L[i][m] L[j][m]) / L[j][j]
                let m0 = j0.max(j.saturating_sub(bw));
                let mut s = l[i * w + bw - (i - j)];
                for m in m0..j {
                    s -= l[i * w + bw - (i - m)] * l[j * w + bw - (j - m)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::Internal(format!(
                            "matrix not positive definite at row {i}"
                        )));
                    }
                    l[i * w + bw] = s.sqrt();
                } else {
                    l[i * w + bw - (i - j)] = s / l[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, l })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let mut s = b[i];
            for j in i.saturating_sub(bw)..i {
                s -= self.l[i * w + bw - (i - j)] * b[j];
            }
            b[i] = s / self.l[i * w + bw];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..n.min(i + bw + 1) {
                s -= self.l[j * w + bw - (j - i)] * b[j];
            }
            b[i] = s / self.l[i * w + bw];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Symmetric tridiagonal matrix: `diag[i]`, and `off[i]` couples rows `i` and `i+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::arg("tridiagonal: off-diagonal must be one shorter"));
        }
        Ok(Self { diag, off })
    }

    /// Constant-coefficient matrix with `n` rows.
    pub fn toeplitz(n: usize, d: f64, o: f64) -> Self {
        Self {
            diag: vec![d; n],
            off: vec![o; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// `self + a * other`.
    pub fn add_scaled(&self, a: f64, other: &SymTridiag) -> SymTridiag {
        SymTridiag {
            diag: self
                .diag
                .iter()
                .zip(&other.diag)
                .map(|(x, y)| x + a * y)
                .collect(),
            off: self
                .off
                .iter()
                .zip(&other.off)
                .map(|(x, y)| x + a * y)
                .collect(),
        }
    }

    pub fn factor(&self) -> Result<BandedCholesky> {
        BandedCholesky::factor(self.len(), 1, |i, k| {
            if k == 0 {
                self.diag[i]
            } else {
                self.off[i - 1]
            }
        })
    }
}
