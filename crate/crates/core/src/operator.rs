//! Algebraic curvature operators: symmetric endomorphisms of `Λ²Rⁿ` whose
//! associated (4,0) tensor satisfies the first Bianchi identity.
//!
//! Sign convention throughout: the diagonal entry of the operator matrix at
//! the coordinate plane `e_i ∧ e_j` equals the sectional curvature of
//! `span(e_i, e_j)`. Under this convention a space form of curvature κ is
//! `κ·Id` on `Λ²` and `Scal = 2·trace`.

use nalgebra::{DMatrix, DVector};

use crate::bivector::BivectorIndex;
use crate::error::{CurvError, Result};
use crate::tensor::SymmetricTwoTensor;
use crate::tol_for;

/// A (not-necessarily-Bianchi) symmetric operator on `Λ²Rⁿ`. After
/// [`bianchi_project`] or any of the model constructors it is an algebraic
/// curvature operator in the strict sense; [`bianchi_defect`] measures the
/// failure.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOperator {
    n: usize,
    index: BivectorIndex,
    matrix: DMatrix<f64>,
}

/// Eigenvalues of a curvature operator, nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Sum of the k smallest eigenvalues.
    pub fn sum_smallest(&self, k: usize) -> f64 {
        self.eigenvalues.iter().take(k).sum()
    }
}

impl CurvatureOperator {
    /// Wraps an N×N matrix over the bivector basis of `Λ²Rⁿ`. The matrix
    /// must be symmetric to within 1e-12 of its norm; it is then
    /// symmetrized exactly.
    pub fn from_matrix(n: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let index = BivectorIndex::new(n);
        let nn = index.len();
        if matrix.nrows() != nn || matrix.ncols() != nn {
            return Err(CurvError::DimensionMismatch(format!(
                "operator for n = {n} needs a {nn}x{nn} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = (&matrix - matrix.transpose()).norm();
        if asym > 1e-12 * (1.0 + matrix.norm()) {
            return Err(CurvError::Domain(format!(
                "operator matrix not symmetric (defect {asym:.3e})"
            )));
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        Ok(CurvatureOperator {
            n,
            index,
            matrix: sym,
        })
    }

    /// Builds entries from the (4,0)-tensor components on sorted pairs:
    /// `f(i, j, k, l)` is evaluated only for i < j and k < l, and must be
    /// symmetric under pair exchange.
    pub fn from_components<F: Fn(usize, usize, usize, usize) -> f64>(n: usize, f: F) -> Self {
        let index = BivectorIndex::new(n);
        let nn = index.len();
        let mut m = DMatrix::zeros(nn, nn);
        for (a, &(i, j)) in index.pairs().iter().enumerate() {
            for (b, &(k, l)) in index.pairs().iter().enumerate().skip(a) {
                let v = f(i, j, k, l);
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        CurvatureOperator { n, index, matrix: m }
    }

    pub fn zeros(n: usize) -> Self {
        let index = BivectorIndex::new(n);
        let nn = index.len();
        CurvatureOperator {
            n,
            index,
            matrix: DMatrix::zeros(nn, nn),
        }
    }

    /// c·Id on `Λ²`, i.e. the operator of a space form of curvature c.
    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let index = BivectorIndex::new(n);
        let nn = index.len();
        CurvatureOperator {
            n,
            index,
            matrix: DMatrix::identity(nn, nn) * c,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// N = n(n-1)/2.
    pub fn bivector_dim(&self) -> usize {
        self.index.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn bivectors(&self) -> &BivectorIndex {
        &self.index
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// (4,0)-tensor component R_{ijkl} for arbitrary index order, with the
    /// antisymmetry signs filled in. Zero when i = j or k = l.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        if i == j || k == l {
            return 0.0;
        }
        let (a, sa) = if i < j { ((i, j), 1.0) } else { ((j, i), -1.0) };
        let (b, sb) = if k < l { ((k, l), 1.0) } else { ((l, k), -1.0) };
        let ia = self.index.index(a.0, a.1).expect("checked range");
        let ib = self.index.index(b.0, b.1).expect("checked range");
        sa * sb * self.matrix[(ia, ib)]
    }

    /// self + c * other.
    pub fn add_scaled(&self, other: &Self, c: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(CurvError::DimensionMismatch(format!(
                "operator dims {} vs {}",
                self.n, other.n
            )));
        }
        Ok(CurvatureOperator {
            n: self.n,
            index: self.index.clone(),
            matrix: &self.matrix + &other.matrix * c,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        CurvatureOperator {
            n: self.n,
            index: self.index.clone(),
            matrix: &self.matrix * c,
        }
    }

    /// Ric_jl = Σ_i R_{ijil}.
    pub fn ricci(&self) -> SymmetricTwoTensor {
        let n = self.n;
        let mut ric = DMatrix::zeros(n, n);
        for j in 0..n {
            for l in j..n {
                let mut s = 0.0;
                for i in 0..n {
                    s += self.component(i, j, i, l);
                }
                ric[(j, l)] = s;
                ric[(l, j)] = s;
            }
        }
        SymmetricTwoTensor::new(ric).expect("constructed symmetric")
    }

    /// Scal = trace(Ric) = 2·trace over Λ².
    pub fn scalar(&self) -> f64 {
        2.0 * self.matrix.trace()
    }

    /// Sectional curvature of span(u, v): ⟨R(u∧v), u∧v⟩ / |u∧v|².
    pub fn sectional(&self, u: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        if u.len() != self.n || v.len() != self.n {
            return Err(CurvError::DimensionMismatch(format!(
                "vectors of length {}, {} for n = {}",
                u.len(),
                v.len(),
                self.n
            )));
        }
        let mut w = DVector::zeros(self.index.len());
        for (a, &(i, j)) in self.index.pairs().iter().enumerate() {
            w[a] = u[i] * v[j] - u[j] * v[i];
        }
        let norm_sq = w.norm_squared();
        if norm_sq.sqrt() < 1e-9 {
            return Err(CurvError::DegeneratePlane {
                norm: norm_sq.sqrt(),
            });
        }
        Ok((w.transpose() * &self.matrix * &w)[(0, 0)] / norm_sq)
    }

    /// Eigenvalues in nondecreasing order. Deterministic; no eigenvector
    /// guarantees for degenerate eigenvalues.
    pub fn spectrum(&self) -> Spectrum {
        if self.index.is_empty() {
            return Spectrum {
                eigenvalues: Vec::new(),
            };
        }
        let eig = self.matrix.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        Spectrum { eigenvalues: vals }
    }

    /// True iff the sum of the k smallest eigenvalues exceeds
    /// `1e-9·(1+‖R‖)`. 1-positivity is ordinary positive definiteness.
    pub fn k_positive(&self, k: usize) -> Result<bool> {
        self.k_positive_with_tol(k, tol_for(self.norm()))
    }

    pub fn k_positive_with_tol(&self, k: usize, tol: f64) -> Result<bool> {
        self.check_k(k)?;
        Ok(self.spectrum().sum_smallest(k) > tol)
    }

    /// Nonnegative variant: sum of the k smallest eigenvalues ≥ −tol.
    pub fn k_nonneg(&self, k: usize) -> Result<bool> {
        self.k_nonneg_with_tol(k, tol_for(self.norm()))
    }

    pub fn k_nonneg_with_tol(&self, k: usize, tol: f64) -> Result<bool> {
        self.check_k(k)?;
        Ok(self.spectrum().sum_smallest(k) >= -tol)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.index.len() {
            return Err(CurvError::Domain(format!(
                "k = {k} out of range 1..={}",
                self.index.len()
            )));
        }
        Ok(())
    }

    pub fn is_positive_definite(&self) -> bool {
        if self.index.is_empty() {
            return true;
        }
        self.k_positive(1).expect("k = 1 is valid")
    }

    /// First two elementary symmetric functions of the eigenvalues plus the
    /// squared Frobenius norm; `gamma2` is the simultaneous positivity of
    /// σ₁ and σ₂.
    pub fn sigma_invariants(&self) -> SigmaInvariants {
        let spec = self.spectrum();
        let sigma1: f64 = spec.eigenvalues().iter().sum();
        let norm_sq: f64 = spec.eigenvalues().iter().map(|l| l * l).sum();
        let sigma2 = 0.5 * (sigma1 * sigma1 - norm_sq);
        SigmaInvariants {
            sigma1,
            sigma2,
            norm_sq,
            gamma2: sigma1 > 0.0 && sigma2 > 0.0,
        }
    }

    /// First Newton transformation t₁(R) = (Scal/2)·Id − R, equal to half
    /// of `riem_t(R, 1)`.
    pub fn newton_t1(&self) -> CurvatureOperator {
        let id = CurvatureOperator::scaled_identity(self.n, self.scalar() / 2.0);
        id.add_scaled(self, -1.0).expect("same dimension")
    }
}

/// σ₁, σ₂, ‖R‖² and the Γ₂ predicate. The identity
/// `8σ₂ = Scal² − 4‖R‖²` holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaInvariants {
    pub sigma1: f64,
    pub sigma2: f64,
    pub norm_sq: f64,
    pub gamma2: bool,
}

/// Kulkarni–Nomizu product of two symmetric 2-tensors, assembled as an
/// operator on `Λ²`:
/// `(h∧k)_{ijkl} = h_ik k_jl + h_jl k_ik − h_il k_jk − h_jk k_il`.
///
/// `(g∧g)/2` is the identity on `Λ²`.
pub fn kulkarni_nomizu(
    h: &SymmetricTwoTensor,
    k: &SymmetricTwoTensor,
) -> Result<CurvatureOperator> {
    if h.dim() != k.dim() {
        return Err(CurvError::DimensionMismatch(format!(
            "tensor dims {} vs {}",
            h.dim(),
            k.dim()
        )));
    }
    let n = h.dim();
    Ok(CurvatureOperator::from_components(n, |i, j, kk, l| {
        h.get(i, kk) * k.get(j, l) + h.get(j, l) * k.get(i, kk)
            - h.get(i, l) * k.get(j, kk)
            - h.get(j, kk) * k.get(i, l)
    }))
}

/// Cyclic sum B_{ijkl} = R_{ijkl} + R_{iklj} + R_{iljk} over all index
/// 4-tuples; its Frobenius norm is zero exactly when R satisfies the first
/// Bianchi identity.
pub fn bianchi_defect(r: &CurvatureOperator) -> f64 {
    let n = r.dim();
    let mut sum_sq = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let b = cyclic_sum(r, i, j, k, l);
                    sum_sq += b * b;
                }
            }
        }
    }
    sum_sq.sqrt()
}

fn cyclic_sum(r: &CurvatureOperator, i: usize, j: usize, k: usize, l: usize) -> f64 {
    r.component(i, j, k, l) + r.component(i, k, l, j) + r.component(i, l, j, k)
}

/// Orthogonal projection onto the kernel of the cyclic-sum map, removing the
/// fully antisymmetric `Λ⁴` component: R ↦ R − b(R)/3. Idempotent, fixes
/// every Kulkarni–Nomizu product.
pub fn bianchi_project(s: &CurvatureOperator) -> CurvatureOperator {
    CurvatureOperator::from_components(s.dim(), |i, j, k, l| {
        s.component(i, j, k, l) - cyclic_sum(s, i, j, k, l) / 3.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::space_form;
    use crate::sampling::{random_operator, random_symmetric_operator};
    use nalgebra::dvector;

    #[test]
    fn space_form_basics() {
        let r = space_form(4, 1.0).unwrap();
        assert_eq!(r.bivector_dim(), 6);
        assert!((r.scalar() - 12.0).abs() < 1e-12);
        let ric = r.ricci();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 3.0 } else { 0.0 };
                assert!((ric.get(i, j) - expect).abs() < 1e-12);
            }
        }
        assert!(bianchi_defect(&r) < 1e-12);
    }

    #[test]
    fn kn_identity_and_diagonal() {
        let g = SymmetricTwoTensor::identity(5);
        let gg = kulkarni_nomizu(&g, &g).unwrap();
        let half = gg.scale(0.5);
        for a in 0..half.bivector_dim() {
            for b in 0..half.bivector_dim() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((half.matrix()[(a, b)] - expect).abs() < 1e-14);
            }
        }

        let h = SymmetricTwoTensor::from_diagonal(&[1.0, 2.0, 3.0, 4.0]);
        let hg = kulkarni_nomizu(&h, &SymmetricTwoTensor::identity(4)).unwrap();
        for (a, &(i, j)) in hg.bivectors().pairs().to_vec().iter().enumerate() {
            for b in 0..hg.bivector_dim() {
                let expect = if a == b { (i + 1 + j + 1) as f64 } else { 0.0 };
                assert!((hg.matrix()[(a, b)] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn kn_dimension_mismatch() {
        let h = SymmetricTwoTensor::identity(3);
        let k = SymmetricTwoTensor::identity(4);
        assert!(kulkarni_nomizu(&h, &k).is_err());
    }

    #[test]
    fn pure_lambda4_has_positive_defect_and_projects_to_zero() {
        // the alternating 4-tensor on R^4 viewed inside S²(Λ²):
        // entries (01,23) = +1, (02,13) = -1, (03,12) = +1
        let idx = BivectorIndex::new(4);
        let mut m = DMatrix::zeros(6, 6);
        let put = |m: &mut DMatrix<f64>, a: usize, b: usize, v: f64| {
            m[(a, b)] = v;
            m[(b, a)] = v;
        };
        let i0123 = (idx.index(0, 1).unwrap(), idx.index(2, 3).unwrap());
        let i0213 = (idx.index(0, 2).unwrap(), idx.index(1, 3).unwrap());
        let i0312 = (idx.index(0, 3).unwrap(), idx.index(1, 2).unwrap());
        put(&mut m, i0123.0, i0123.1, 1.0);
        put(&mut m, i0213.0, i0213.1, -1.0);
        put(&mut m, i0312.0, i0312.1, 1.0);
        let omega = CurvatureOperator::from_matrix(4, m).unwrap();
        assert!(bianchi_defect(&omega) > 0.5);
        let proj = bianchi_project(&omega);
        assert!(proj.norm() < 1e-12);

        // the single symmetrized off-diagonal entry also has positive defect
        let single = CurvatureOperator::from_components(4, |i, j, k, l| {
            if (i, j, k, l) == (0, 1, 2, 3) {
                1.0
            } else {
                0.0
            }
        });
        assert!(bianchi_defect(&single) > 0.5);
    }

    #[test]
    fn projection_is_idempotent_and_fixes_kn() {
        let mut rng = crate::sampling::seeded_rng(11, 0);
        for n in [4usize, 5] {
            let s = random_symmetric_operator(n, &mut rng);
            let p1 = bianchi_project(&s);
            let p2 = bianchi_project(&p1);
            assert!(bianchi_defect(&p1) <= 1e-12 * (1.0 + s.norm()));
            assert!((p1.matrix() - p2.matrix()).norm() <= 1e-12 * (1.0 + p1.norm()));

            let r = random_operator(n, &mut rng);
            let fixed = bianchi_project(&r);
            assert!((r.matrix() - fixed.matrix()).norm() <= 1e-12 * (1.0 + r.norm()));
        }
    }

    #[test]
    fn sectional_of_models() {
        let r = space_form(5, 2.5).unwrap();
        let u = dvector![1.0, 0.0, 0.0, 0.0, 0.0];
        let v = dvector![0.0, 0.0, 1.0, 0.0, 0.0];
        assert!((r.sectional(&u, &v).unwrap() - 2.5).abs() < 1e-12);

        // degenerate plane
        assert!(matches!(
            r.sectional(&u, &u),
            Err(CurvError::DegeneratePlane { .. })
        ));
    }

    #[test]
    fn k_positive_arithmetic() {
        // spectrum {-1, 3, 3, 3, 3, 3} on n = 4
        let mut m = DMatrix::identity(6, 6) * 3.0;
        m[(0, 0)] = -1.0;
        let r = CurvatureOperator::from_matrix(4, m).unwrap();
        assert!(!r.k_positive(1).unwrap());
        assert!(r.k_positive(2).unwrap());
        assert!(r.k_positive(6).unwrap());
        assert!(r.k_positive(0).is_err());
        assert!(r.k_positive(7).is_err());
    }

    #[test]
    fn sigma_invariants_space_form3() {
        let r = space_form(3, 1.0).unwrap();
        let s = r.sigma_invariants();
        assert!((s.sigma1 - 3.0).abs() < 1e-12);
        assert!((s.sigma2 - 3.0).abs() < 1e-12);
        assert!((s.norm_sq - 3.0).abs() < 1e-12);
        assert!(s.gamma2);
    }

    #[test]
    fn newton_t1_identities() {
        let r = space_form(4, 2.0).unwrap();
        let t1 = r.newton_t1();
        // (n(n-1)κ/2 − κ)·Id with n = 4, κ = 2
        let expect = 12.0 - 2.0;
        for a in 0..6 {
            assert!((t1.matrix()[(a, a)] - expect).abs() < 1e-12);
        }

        let mut rng = crate::sampling::seeded_rng(3, 0);
        let r = random_operator(5, &mut rng);
        let alt = crate::invariants::riem_t(&r, 1.0).scale(0.5);
        assert!((t1_matrix_diff(&r.newton_t1(), &alt)) < 1e-12);
    }

    fn t1_matrix_diff(a: &CurvatureOperator, b: &CurvatureOperator) -> f64 {
        (a.matrix() - b.matrix()).norm()
    }
}
