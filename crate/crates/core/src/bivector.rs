//! Lexicographic enumeration of the bivector basis `{e_i ∧ e_j : i < j}`
//! of `Λ²Rⁿ`. Every curvature operator in this crate is a matrix over
//! this basis, so the `(i,j) ↔ rank` bijection is the load-bearing bit.

use crate::error::{CurvError, Result};

/// Index bookkeeping for the bivector basis of `Λ²Rⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivectorIndex {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl BivectorIndex {
    pub fn new(n: usize) -> Self {
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j));
            }
        }
        BivectorIndex { n, pairs }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// N = n(n-1)/2, the number of basis bivectors.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Lexicographic rank of the pair (i, j), requiring i < j < n.
    pub fn index(&self, i: usize, j: usize) -> Result<usize> {
        if i >= j || j >= self.n {
            return Err(CurvError::Domain(format!(
                "bivector pair ({i}, {j}) out of range for n = {}",
                self.n
            )));
        }
        Ok(biv_index_unchecked(self.n, i, j))
    }

    /// Inverse of `index`.
    pub fn pair(&self, k: usize) -> Result<(usize, usize)> {
        self.pairs.get(k).copied().ok_or_else(|| {
            CurvError::Domain(format!("bivector rank {k} out of range (N = {})", self.pairs.len()))
        })
    }
}

fn biv_index_unchecked(n: usize, i: usize, j: usize) -> usize {
    // pairs with first coordinate < i, then offset within row i
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Lexicographic rank of (i, j) among pairs 0 ≤ i < j < n.
pub fn biv_index(n: usize, i: usize, j: usize) -> Result<usize> {
    BivectorIndex::new(n).index(i, j)
}

/// Pair at rank k; round-trips with [`biv_index`].
pub fn biv_pair(n: usize, k: usize) -> Result<(usize, usize)> {
    BivectorIndex::new(n).pair(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_for_n4() {
        assert_eq!(biv_index(4, 0, 1).unwrap(), 0);
        assert_eq!(biv_index(4, 0, 3).unwrap(), 2);
        assert_eq!(biv_index(4, 2, 3).unwrap(), 5);
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(biv_index(4, 1, 1).is_err());
        assert!(biv_index(4, 2, 1).is_err());
        assert!(biv_index(4, 1, 4).is_err());
    }

    #[test]
    fn round_trip_all_pairs_up_to_n10() {
        for n in 2..=10 {
            let idx = BivectorIndex::new(n);
            assert_eq!(idx.len(), n * (n - 1) / 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    let k = idx.index(i, j).unwrap();
                    assert_eq!(idx.pair(k).unwrap(), (i, j));
                }
            }
            // ranks are exactly 0..N in order
            for (k, &(i, j)) in idx.pairs().iter().enumerate() {
                assert_eq!(idx.index(i, j).unwrap(), k);
            }
        }
    }
}
