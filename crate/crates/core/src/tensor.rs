//! Symmetric bilinear forms in the fixed orthonormal frame.

use nalgebra::DMatrix;

use crate::error::{CurvError, Result};

/// A symmetric 2-tensor h_ij in an orthonormal frame. The metric itself is
/// [`SymmetricTwoTensor::identity`].
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTwoTensor {
    n: usize,
    entries: DMatrix<f64>,
}

impl SymmetricTwoTensor {
    /// Builds from an n×n matrix, symmetrizing is *not* done silently:
    /// asymmetric input is rejected.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(CurvError::DimensionMismatch(format!(
                "expected square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = entries.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if entries[(i, j)] != entries[(j, i)] {
                    return Err(CurvError::Domain(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(SymmetricTwoTensor { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        SymmetricTwoTensor {
            n,
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        SymmetricTwoTensor {
            n,
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        SymmetricTwoTensor { n, entries: m }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn scale(&self, c: f64) -> Self {
        SymmetricTwoTensor {
            n: self.n,
            entries: &self.entries * c,
        }
    }

    /// self + c * other
    pub fn add_scaled(&self, other: &Self, c: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(CurvError::DimensionMismatch(format!(
                "tensor dims {} vs {}",
                self.n, other.n
            )));
        }
        Ok(SymmetricTwoTensor {
            n: self.n,
            entries: &self.entries + &other.entries * c,
        })
    }

    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.entries.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = 1.0;
        assert!(SymmetricTwoTensor::new(m).is_err());
    }

    #[test]
    fn diagonal_round_trip() {
        let t = SymmetricTwoTensor::from_diagonal(&[1.0, -2.0, 3.0]);
        assert_eq!(t.get(1, 1), -2.0);
        assert_eq!(t.trace(), 2.0);
        let evs = t.eigenvalues();
        assert_eq!(evs, vec![-2.0, 1.0, 3.0]);
    }
}
