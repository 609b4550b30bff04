//! Double-form lifts `g^k/k!·ω` and the Weitzenböck curvature term `W_p`
//! acting on p-forms.
//!
//! The lift of a (q,q) double form to an operator on `Λ^{q+k}` is computed
//! by brute-force signed matching: entry (I, J) sums over all ways to match
//! k indices of I with k indices of J via Kronecker deltas, with shuffle
//! signs, times ω on the remaining q×q block. The normalization is pinned
//! by `lift(1, p) = Id` on `Λ^p`, which simultaneously makes `W_1 = Ric`
//! and the curvature-term identity hold.

use nalgebra::DMatrix;
use serde_json::json;

use crate::error::{CurvError, Result};
use crate::invariants::riem_t;
use crate::operator::CurvatureOperator;
use crate::tensor::SymmetricTwoTensor;

/// Largest dimension and form degree the factorial-time lift accepts.
const MAX_DIM: usize = 8;
const MAX_DEGREE: usize = 4;

/// A double form of bidegree (q,q) for q ∈ {0, 1, 2}: the only bidegrees
/// the Weitzenböck term needs.
#[derive(Debug, Clone)]
pub enum DoubleForm {
    Scalar(f64),
    OneOne(SymmetricTwoTensor),
    TwoTwo(CurvatureOperator),
}

impl DoubleForm {
    pub fn bidegree(&self) -> usize {
        match self {
            DoubleForm::Scalar(_) => 0,
            DoubleForm::OneOne(_) => 1,
            DoubleForm::TwoTwo(_) => 2,
        }
    }

    /// Value on sorted index tuples of length = bidegree.
    fn value(&self, i: &[usize], j: &[usize]) -> f64 {
        match self {
            DoubleForm::Scalar(s) => *s,
            DoubleForm::OneOne(h) => h.get(i[0], j[0]),
            DoubleForm::TwoTwo(r) => r.component(i[0], i[1], j[0], j[1]),
        }
    }
}

/// Symmetric operator on `Λ^p Rⁿ` over the lexicographic basis of strictly
/// increasing p-tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct PFormOperator {
    n: usize,
    p: usize,
    basis: Vec<Vec<usize>>,
    matrix: DMatrix<f64>,
}

impl PFormOperator {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// self + c * other.
    pub fn add_scaled(&self, other: &Self, c: f64) -> Result<Self> {
        if self.n != other.n || self.p != other.p {
            return Err(CurvError::DimensionMismatch(format!(
                "p-form operators ({}, {}) vs ({}, {})",
                self.n, self.p, other.n, other.p
            )));
        }
        Ok(PFormOperator {
            n: self.n,
            p: self.p,
            basis: self.basis.clone(),
            matrix: &self.matrix + &other.matrix * c,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        PFormOperator {
            n: self.n,
            p: self.p,
            basis: self.basis.clone(),
            matrix: &self.matrix * c,
        }
    }

    /// `{n, p, matrix}` with the matrix as row-major nested arrays.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<f64>> = (0..self.matrix.nrows())
            .map(|r| (0..self.matrix.ncols()).map(|c| self.matrix[(r, c)]).collect())
            .collect();
        json!({ "n": self.n, "p": self.p, "matrix": rows })
    }
}

/// All strictly increasing p-tuples from {0..n-1} in lexicographic order.
fn multi_indices(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    if p == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(cur.clone());
        let mut i = p;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if cur[i] < n - (p - i) {
                cur[i] += 1;
                for j in (i + 1)..p {
                    cur[j] = cur[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    out
}

/// Shuffle sign of moving the sub-tuple A (a subset of I, both sorted) to
/// the front of I: (-1)^{Σ (pos_i - i)}.
fn shuffle_sign(a: &[usize], i: &[usize]) -> f64 {
    let mut exponent = 0usize;
    for (rank, &elem) in a.iter().enumerate() {
        let pos = i.iter().position(|&x| x == elem).expect("A is a subset of I");
        exponent += pos - rank;
    }
    if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Operator on `Λ^{q+k}` associated to the double form `(g^k/k!)·ω`.
pub fn lift(omega: &DoubleForm, k: usize, n: usize) -> Result<PFormOperator> {
    let q = omega.bidegree();
    let p = q + k;
    if p > n {
        return Err(CurvError::Domain(format!(
            "degree overflow: lift to degree {p} exceeds dimension {n}"
        )));
    }
    if n > MAX_DIM || p > MAX_DEGREE {
        return Err(CurvError::SizeLimit(format!(
            "lift supports n <= {MAX_DIM}, degree <= {MAX_DEGREE}; got n = {n}, degree = {p}"
        )));
    }
    if let DoubleForm::OneOne(h) = omega {
        if h.dim() != n {
            return Err(CurvError::DimensionMismatch(format!(
                "tensor dim {} vs ambient {n}",
                h.dim()
            )));
        }
    }
    if let DoubleForm::TwoTwo(r) = omega {
        if r.dim() != n {
            return Err(CurvError::DimensionMismatch(format!(
                "operator dim {} vs ambient {n}",
                r.dim()
            )));
        }
    }

    let basis = multi_indices(n, p);
    let nn = basis.len();
    let mut m = DMatrix::zeros(nn, nn);
    for (a, idx_i) in basis.iter().enumerate() {
        for (b, idx_j) in basis.iter().enumerate().skip(a) {
            let common: Vec<usize> = idx_i
                .iter()
                .copied()
                .filter(|x| idx_j.contains(x))
                .collect();
            let mut entry = 0.0;
            if common.len() >= k {
                for matched in multi_indices(common.len(), k) {
                    let a_set: Vec<usize> = matched.iter().map(|&t| common[t]).collect();
                    let rest_i: Vec<usize> = idx_i
                        .iter()
                        .copied()
                        .filter(|x| !a_set.contains(x))
                        .collect();
                    let rest_j: Vec<usize> = idx_j
                        .iter()
                        .copied()
                        .filter(|x| !a_set.contains(x))
                        .collect();
                    entry += shuffle_sign(&a_set, idx_i)
                        * shuffle_sign(&a_set, idx_j)
                        * omega.value(&rest_i, &rest_j);
                }
            }
            m[(a, b)] = entry;
            m[(b, a)] = entry;
        }
    }
    Ok(PFormOperator {
        n,
        p,
        basis,
        matrix: m,
    })
}

/// Weitzenböck curvature term on p-forms:
/// `W_p = g^{p-1}/(p-1)!·Ric − 2·g^{p-2}/(p-2)!·R`
/// (the second term is absent for p = 1, so `W_1 = Ric`).
pub fn weitzenbock(r: &CurvatureOperator, p: usize) -> Result<PFormOperator> {
    let n = r.dim();
    if p == 0 || p > n - 1 {
        return Err(CurvError::Domain(format!(
            "Weitzenboeck term needs 1 <= p <= n-1, got p = {p}, n = {n}"
        )));
    }
    let ric_term = lift(&DoubleForm::OneOne(r.ricci()), p - 1, n)?;
    if p == 1 {
        return Ok(ric_term);
    }
    let r_term = lift(&DoubleForm::TwoTwo(r.clone()), p - 2, n)?;
    ric_term.add_scaled(&r_term, -2.0)
}

/// Frobenius norm of
/// `t·W_p − lift(Riem_t, p−2) − lift(t·Ric − (p−1)·Scal/2·g, p−1)`,
/// which vanishes identically.
pub fn weitzenbock_identity_residual(r: &CurvatureOperator, t: f64, p: usize) -> Result<f64> {
    let n = r.dim();
    if p < 2 || p > n - 1 {
        return Err(CurvError::Domain(format!(
            "identity needs 2 <= p <= n-1, got p = {p}, n = {n}"
        )));
    }
    let wp = weitzenbock(r, p)?.scale(t);
    let first = lift(&DoubleForm::TwoTwo(riem_t(r, t)), p - 2, n)?;
    let correction = r
        .ricci()
        .scale(t)
        .add_scaled(
            &SymmetricTwoTensor::identity(n),
            -(p as f64 - 1.0) * r.scalar() / 2.0,
        )
        .expect("same dimension");
    let second = lift(&DoubleForm::OneOne(correction), p - 1, n)?;
    let rhs = first.add_scaled(&second, 1.0)?;
    Ok((wp.matrix() - rhs.matrix()).norm())
}

/// Positivity witness consumed by the Betti-vanishing argument.
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingWitness {
    /// `N − p(n−p)/2`: pointwise Riem above this forces the terms below
    /// positive.
    pub t_threshold: f64,
    /// Minimum eigenvalue of `W_k` over p ≤ k ≤ n−p.
    pub wp_min_eigenvalue: f64,
}

/// Checks the vanishing-theorem hypothesis range: computes the threshold
/// `N − p(n−p)/2` and the worst eigenvalue of `W_k` for p ≤ k ≤ n−p.
pub fn vanishing_witness(r: &CurvatureOperator, p: usize) -> Result<VanishingWitness> {
    let n = r.dim();
    if p < 2 || p > n - 2 {
        return Err(CurvError::Domain(format!(
            "witness needs 2 <= p <= n-2, got p = {p}, n = {n}"
        )));
    }
    let nn = (n * (n - 1) / 2) as f64;
    let t_threshold = nn - (p * (n - p)) as f64 / 2.0;
    let mut min_eig = f64::INFINITY;
    for k in p..=(n - p) {
        min_eig = min_eig.min(weitzenbock(r, k)?.min_eigenvalue());
    }
    Ok(VanishingWitness {
        t_threshold,
        wp_min_eigenvalue: min_eig,
    })
}
