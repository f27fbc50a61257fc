use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;

/// Symmetric, unit-diagonal matrix of category correlations.
///
/// Construction validates shape, symmetry, the unit diagonal and the entry
/// range. Positive semidefiniteness is not required here; use
/// [`nearest_psd`] (or [`CorrelationMatrix::repaired`]) before sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct CorrelationMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        CorrelationMatrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::validation("correlation matrix is empty"));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "correlation row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let m = CorrelationMatrix { dim, entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for a in 0..n {
            if self.get(a, a) != 1.0 {
                return Err(Error::validation(format!(
                    "correlation diagonal entry ({a},{a}) is {}, expected 1",
                    self.get(a, a)
                )));
            }
            for b in 0..n {
                let v = self.get(a, b);
                if !v.is_finite() || !(-1.0..=1.0).contains(&v) {
                    return Err(Error::validation(format!(
                        "correlation entry ({a},{b}) = {v} outside [-1, 1]"
                    )));
                }
                if (v - self.get(b, a)).abs() > SYMMETRY_TOL {
                    return Err(Error::validation(format!(
                        "correlation matrix not symmetric at ({a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.dim + b]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
        SymmetricEigen::new(m)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= 0.0
    }

    /// Nearest-PSD repair of this matrix; see [`nearest_psd`].
    pub fn repaired(&self) -> CorrelationMatrix {
        nearest_psd(&self.rows()).expect("a valid correlation matrix is symmetric")
    }

    /// Reorders rows and columns: entry `(a, b)` of the result is entry
    /// `(perm[a], perm[b])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> CorrelationMatrix {
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                entries[a * n + b] = self.get(perm[a], perm[b]);
            }
        }
        CorrelationMatrix { dim: n, entries }
    }
}

impl TryFrom<Vec<Vec<f64>>> for CorrelationMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        CorrelationMatrix::from_rows(rows)
    }
}

impl From<CorrelationMatrix> for Vec<Vec<f64>> {
    fn from(m: CorrelationMatrix) -> Self {
        m.rows()
    }
}

fn check_square_symmetric(rows: &[Vec<f64>]) -> Result<usize> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::validation("matrix is empty"));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation(format!("row {i} has a non-finite entry")));
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if (rows[a][b] - rows[b][a]).abs() > SYMMETRY_TOL {
                return Err(Error::validation(format!(
                    "matrix not symmetric at ({a},{b}): {} vs {}",
                    rows[a][b], rows[b][a]
                )));
            }
        }
    }
    Ok(n)
}

/// Projects a symmetric matrix onto the PSD cone by clipping negative
/// eigenvalues at zero, then rescales to a unit diagonal.
///
/// Inputs that are already PSD skip the reconstruction, so the repair is
/// idempotent on valid correlation matrices.
pub fn nearest_psd(rows: &[Vec<f64>]) -> Result<CorrelationMatrix> {
    let n = check_square_symmetric(rows)?;
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, &flat));
    let min_eig = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);

    let clipped = if min_eig >= 0.0 {
        DMatrix::from_row_slice(n, n, &flat)
    } else {
        let lambda = eig.eigenvalues.map(|l| l.max(0.0));
        &eig.eigenvectors * DMatrix::from_diagonal(&lambda) * eig.eigenvectors.transpose()
    };

    let scale: Vec<f64> = (0..n)
        .map(|i| {
            let d = clipped[(i, i)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let mut entries = vec![0.0; n * n];
    for a in 0..n {
        entries[a * n + a] = 1.0;
        for b in (a + 1)..n {
            let v = 0.5 * (clipped[(a, b)] + clipped[(b, a)]) * scale[a] * scale[b];
            let v = v.clamp(-1.0, 1.0);
            entries[a * n + b] = v;
            entries[b * n + a] = v;
        }
    }
    Ok(CorrelationMatrix { dim: n, entries })
}

/// Returns a row-major `n x n` factor `B` with `B * B^T = cov`, built from the
/// eigen-decomposition with negative eigenvalues clipped. Works for singular
/// (including all-zero) covariance matrices.
pub fn covariance_factor(cov: &[f64], n: usize) -> Result<Vec<f64>> {
    if cov.len() != n * n {
        return Err(Error::DimensionMismatch(format!(
            "covariance has {} entries, expected {}",
            cov.len(),
            n * n
        )));
    }
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, cov));
    let mut factor = vec![0.0; n * n];
    for j in 0..n {
        let s = eig.eigenvalues[j].max(0.0).sqrt();
        for i in 0..n {
            factor[i * n + j] = eig.eigenvectors[(i, j)] * s;
        }
    }
    Ok(factor)
}
