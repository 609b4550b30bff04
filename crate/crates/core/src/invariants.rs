//! The spectral scalar-curvature invariants: the `Riem_t` tensor family,
//! the pointwise `Riem` and small `riem` values, intermediate curvatures
//! `C_p` and the p-curvature, and the conformally flat `Ein_T` reduction.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{CurvError, Result};
use crate::models::conformally_flat;
use crate::operator::{kulkarni_nomizu, CurvatureOperator};
use crate::sampling::{random_orthonormal_frame, seeded_rng};
use crate::tensor::SymmetricTwoTensor;
use crate::{tol_for, TOL_BASE};

/// `Riem_t(R) = Scal·Id − 2t·R` on Λ² (tensor form `Scal·g²/2 − 2tR`).
///
/// Its trace is `(N − t)·Scal`; for PSC operators it is positive definite
/// exactly when `t < Scal/(2λ_max)`.
pub fn riem_t(r: &CurvatureOperator, t: f64) -> CurvatureOperator {
    CurvatureOperator::scaled_identity(r.dim(), r.scalar())
        .add_scaled(r, -2.0 * t)
        .expect("same dimension")
}

/// Pointwise spectral scalar curvature `Scal/(2λ_max)`, or 0 when the
/// scalar curvature is not positive. Positive values lie in (0, N], with N
/// attained exactly by constant-curvature operators.
pub fn riem_pointwise(r: &CurvatureOperator) -> f64 {
    riem_pointwise_with_tol(r, tol_for(r.norm()))
}

pub fn riem_pointwise_with_tol(r: &CurvatureOperator, tol: f64) -> f64 {
    let scal = r.scalar();
    if scal <= tol {
        return 0.0;
    }
    scal / (2.0 * r.spectrum().lambda_max())
}

/// Value of the small `riem` invariant at one operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RiemSmall {
    /// R is nonnegative with positive scalar curvature: the defining set
    /// `{t < 0 : Riem_t > 0}` is unbounded below.
    NegInfinity,
    /// Finite value: 0 when the set is empty (Scal ≤ 0), otherwise the
    /// negative number `Scal/(2λ_min)`.
    Value(f64),
}

impl RiemSmall {
    pub fn as_f64(&self) -> f64 {
        match self {
            RiemSmall::NegInfinity => f64::NEG_INFINITY,
            RiemSmall::Value(v) => *v,
        }
    }
}

/// Pointwise small `riem`: the infimum of `{t < 0 : Riem_t(R) > 0}`.
pub fn riem_small_pointwise(r: &CurvatureOperator) -> RiemSmall {
    riem_small_pointwise_with_tol(r, tol_for(r.norm()))
}

pub fn riem_small_pointwise_with_tol(r: &CurvatureOperator, tol: f64) -> RiemSmall {
    let scal = r.scalar();
    if scal <= tol {
        return RiemSmall::Value(0.0);
    }
    let lambda_min = r.spectrum().lambda_min();
    if lambda_min >= -tol {
        RiemSmall::NegInfinity
    } else {
        RiemSmall::Value(scal / (2.0 * lambda_min))
    }
}

/// An ordered orthonormal frame with its first p vectors marked as the
/// plane P.
#[derive(Debug, Clone)]
pub struct PlaneFrame {
    vectors: DMatrix<f64>, // columns are frame vectors
    p: usize,
}

impl PlaneFrame {
    /// Columns of `vectors` are the frame; Gram matrix must be the identity
    /// within 1e-9.
    pub fn new(vectors: DMatrix<f64>, p: usize) -> Result<Self> {
        let n = vectors.nrows();
        if vectors.ncols() != n {
            return Err(CurvError::DimensionMismatch(format!(
                "frame must be square, got {}x{}",
                n,
                vectors.ncols()
            )));
        }
        if p == 0 || p > n {
            return Err(CurvError::Domain(format!("plane size p = {p} out of 1..={n}")));
        }
        let gram = vectors.transpose() * &vectors;
        if (gram - DMatrix::identity(n, n)).norm() > 1e-9 {
            return Err(CurvError::Domain("frame is not orthonormal".into()));
        }
        Ok(PlaneFrame { vectors, p })
    }

    /// Coordinate frame with the axes in `plane` first, the rest after, all
    /// in increasing order.
    pub fn coordinate(n: usize, plane: &[usize]) -> Result<Self> {
        let mut order: Vec<usize> = plane.to_vec();
        order.sort_unstable();
        order.dedup();
        if order.len() != plane.len() || order.iter().any(|&i| i >= n) {
            return Err(CurvError::Domain("invalid coordinate plane".into()));
        }
        let mut rest: Vec<usize> = (0..n).filter(|i| !order.contains(i)).collect();
        let p = order.len();
        order.append(&mut rest);
        let mut m = DMatrix::zeros(n, n);
        for (col, &axis) in order.iter().enumerate() {
            m[(axis, col)] = 1.0;
        }
        PlaneFrame::new(m, p)
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn plane_size(&self) -> usize {
        self.p
    }

    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.vectors.column(k).into_owned()
    }
}

/// p-intermediate curvature of the marked plane:
/// `C_p(P) = Σ_{i≤p} Σ_{j>i} Sec(e_i, e_j)`.
///
/// `C_1` is the Ricci curvature of e_1, `C_{n−1}` is Scal/2.
pub fn c_p(r: &CurvatureOperator, frame: &PlaneFrame) -> Result<f64> {
    check_frame(r, frame)?;
    if frame.plane_size() > r.dim() - 1 {
        return Err(CurvError::Domain(format!(
            "C_p needs p <= n-1, got p = {}",
            frame.plane_size()
        )));
    }
    let n = r.dim();
    let mut sum = 0.0;
    for i in 0..frame.plane_size() {
        for j in (i + 1)..n {
            sum += r.sectional(&frame.vector(i), &frame.vector(j))?;
        }
    }
    Ok(sum)
}

/// p-curvature of the marked plane: twice the sum of sectional curvatures
/// of coordinate planes orthogonal to P, normalized so that
/// `C_p = Scal/2 − s_p/2` exactly.
pub fn p_curvature(r: &CurvatureOperator, frame: &PlaneFrame) -> Result<f64> {
    check_frame(r, frame)?;
    if frame.plane_size() > r.dim() - 2 {
        return Err(CurvError::Domain(format!(
            "p-curvature needs p <= n-2, got p = {}",
            frame.plane_size()
        )));
    }
    let n = r.dim();
    let mut sum = 0.0;
    for i in frame.plane_size()..n {
        for j in (i + 1)..n {
            sum += r.sectional(&frame.vector(i), &frame.vector(j))?;
        }
    }
    Ok(2.0 * sum)
}

fn check_frame(r: &CurvatureOperator, frame: &PlaneFrame) -> Result<()> {
    if frame.dim() != r.dim() {
        return Err(CurvError::DimensionMismatch(format!(
            "frame dim {} vs operator dim {}",
            frame.dim(),
            r.dim()
        )));
    }
    Ok(())
}

/// Result of a sampled minimization of C_p over the Grassmannian.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CpMinResult {
    pub value: f64,
    pub p: usize,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

/// Minimum of C_p over all coordinate p-planes plus `samples` Haar-random
/// frames. An upper bound on the true infimum; deterministic given the
/// seed, and nonincreasing as `samples` grows with the same seed.
pub fn c_p_min(r: &CurvatureOperator, p: usize, samples: usize, seed: u64) -> Result<CpMinResult> {
    let n = r.dim();
    if p == 0 || p > n - 1 {
        return Err(CurvError::Domain(format!("p = {p} out of 1..={}", n - 1)));
    }
    let mut best = f64::INFINITY;
    let mut subset: Vec<usize> = (0..p).collect();
    loop {
        let frame = PlaneFrame::coordinate(n, &subset)?;
        best = best.min(c_p(r, &frame)?);
        if !next_subset(&mut subset, n) {
            break;
        }
    }
    let mut rng = seeded_rng(seed, 0);
    for _ in 0..samples {
        let q = random_orthonormal_frame(n, &mut rng);
        let frame = PlaneFrame::new(q, p)?;
        best = best.min(c_p(r, &frame)?);
    }
    Ok(CpMinResult {
        value: best,
        p,
        samples,
        seed,
        tolerance: tol_for(r.norm()),
    })
}

/// Advances a sorted subset of {0..n-1} to its lexicographic successor of
/// the same size; false when exhausted.
fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Coupling `T(t) = 4t(n−1) / ((n−1)(n−2) + 2t)` of the conformally flat
/// reduction; strictly increasing on `t > −(n−1)(n−2)/2`.
pub fn conformal_coupling(t: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    let denominator = (nf - 1.0) * (nf - 2.0) + 2.0 * t;
    if denominator.abs() < 1e-12 {
        return Err(CurvError::SingularCoupling { denominator });
    }
    Ok(4.0 * t * (nf - 1.0) / denominator)
}

/// Residual of the conformally flat identity
/// `(n−2)·Riem_t(gA) = c · g ∧ Ein_T` with
/// `Ein_T = Scal·g − T·Ric`, `T = T(t)`, `c = ((n−1)(n−2)+2t)/(2(n−1))`.
///
/// Zero (within 1e-9 of scale) for every symmetric A and admissible t.
pub fn conformal_identity_check(a: &SymmetricTwoTensor, t: f64) -> Result<f64> {
    let n = a.dim();
    if n < 3 {
        return Err(CurvError::Domain(
            "conformal identity needs dimension >= 3".into(),
        ));
    }
    let nf = n as f64;
    let r = conformally_flat(a)?;
    let big_t = conformal_coupling(t, n)?;
    let scal = r.scalar();
    let ric = r.ricci();
    let ein = SymmetricTwoTensor::identity(n)
        .scale(scal)
        .add_scaled(&ric, -big_t)?;
    let g = SymmetricTwoTensor::identity(n);
    let rhs = kulkarni_nomizu(&g, &ein)?;
    let c = ((nf - 1.0) * (nf - 2.0) + 2.0 * t) / (2.0 * (nf - 1.0));
    let lhs = riem_t(&r, t).scale(nf - 2.0);
    Ok((lhs.matrix() - rhs.matrix() * c).norm())
}

/// Relative tolerance the conformal identity is expected to meet.
pub fn conformal_identity_scale(a: &SymmetricTwoTensor, t: f64) -> f64 {
    TOL_BASE * (1.0 + a.norm() * (1.0 + t.abs()) * a.dim() as f64 * a.dim() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{fubini_study_cp, fubini_study_hp, product, space_form};
    use crate::sampling::random_operator;
    use rand::Rng;

    #[test]
    fn riem_t_space_form() {
        let n = 5;
        let r = space_form(n, 1.0).unwrap();
        for &t in &[0.5, 3.0, 9.0, 11.0] {
            let rt = riem_t(&r, t);
            let expect = n as f64 * (n as f64 - 1.0) - 2.0 * t;
            for a in 0..rt.bivector_dim() {
                assert!((rt.matrix()[(a, a)] - expect).abs() < 1e-12);
            }
            assert_eq!(rt.is_positive_definite(), t < 10.0);
        }
    }

    #[test]
    fn riem_t_trace_identity() {
        let mut rng = seeded_rng(5, 0);
        for _ in 0..20 {
            let r = random_operator(5, &mut rng);
            let t = 2.345;
            let nn = r.bivector_dim() as f64;
            let trace = riem_t(&r, t).matrix().trace();
            let expect = (nn - t) * r.scalar();
            assert!((trace - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn riem_t_three_dim_eigenvalues_from_ricci() {
        let mut rng = seeded_rng(6, 0);
        for _ in 0..50 {
            let r = random_operator(3, &mut rng);
            let t = 1.7;
            let scal = r.scalar();
            let mut expect: Vec<f64> = r
                .ricci()
                .eigenvalues()
                .iter()
                .map(|rho| (1.0 - t) * scal + 2.0 * t * rho)
                .collect();
            expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let got = riem_t(&r, t).spectrum();
            for (g, e) in got.eigenvalues().iter().zip(&expect) {
                assert!((g - e).abs() < 1e-9 * (1.0 + e.abs()));
            }
        }
    }

    #[test]
    fn riem_pointwise_models() {
        assert!((riem_pointwise(&space_form(6, 2.0).unwrap()) - 15.0).abs() < 1e-9);
        assert!((riem_pointwise(&fubini_study_cp(3).unwrap()) - 3.0).abs() < 1e-9);
        assert!((riem_pointwise(&fubini_study_hp(2).unwrap()) - 8.0).abs() < 1e-9);
        // nonpositive scalar curvature returns 0
        assert_eq!(riem_pointwise(&space_form(4, -1.0).unwrap()), 0.0);
        assert_eq!(riem_pointwise(&space_form(4, 0.0).unwrap()), 0.0);
    }

    #[test]
    fn riem_small_cases() {
        assert_eq!(
            riem_small_pointwise(&space_form(4, 1.0).unwrap()),
            RiemSmall::NegInfinity
        );
        let r = product(
            &space_form(3, 1.0).unwrap(),
            &space_form(2, -1.0).unwrap(),
        )
        .unwrap();
        match riem_small_pointwise(&r) {
            RiemSmall::Value(v) => assert!((v + 2.0).abs() < 1e-9),
            _ => panic!("expected finite value"),
        }
        // scaling invariance
        match riem_small_pointwise(&r.scale(3.0)) {
            RiemSmall::Value(v) => assert!((v + 2.0).abs() < 1e-9),
            _ => panic!("expected finite value"),
        }
        // empty set convention
        assert_eq!(
            riem_small_pointwise(&space_form(3, -1.0).unwrap()),
            RiemSmall::Value(0.0)
        );
    }

    #[test]
    fn c_p_boundary_cases() {
        let mut rng = seeded_rng(8, 0);
        let r = random_operator(5, &mut rng);
        let n = 5;
        // p = n-1 gives Scal/2 for any frame
        let q = random_orthonormal_frame(n, &mut rng);
        let frame = PlaneFrame::new(q, n - 1).unwrap();
        let v = c_p(&r, &frame).unwrap();
        assert!((v - r.scalar() / 2.0).abs() < 1e-9 * (1.0 + r.scalar().abs()));
        // p = 1 gives Ric(e_1, e_1)
        let frame = PlaneFrame::coordinate(n, &[2]).unwrap();
        let v = c_p(&r, &frame).unwrap();
        assert!((v - r.ricci().get(2, 2)).abs() < 1e-9);
    }

    #[test]
    fn c_p_and_s_p_on_s2xt2() {
        let r = product(&space_form(2, 1.0).unwrap(), &space_form(2, 0.0).unwrap()).unwrap();
        let torus = PlaneFrame::coordinate(4, &[2, 3]).unwrap();
        let sphere = PlaneFrame::coordinate(4, &[0, 1]).unwrap();
        assert!(c_p(&r, &torus).unwrap().abs() < 1e-12);
        assert!((c_p(&r, &sphere).unwrap() - 1.0).abs() < 1e-12);
        // s_2 of the sphere plane: torus planes are flat
        assert!(p_curvature(&r, &sphere).unwrap().abs() < 1e-12);
    }

    #[test]
    fn p_curvature_identity_random() {
        let mut rng = seeded_rng(9, 0);
        for &n in &[4usize, 5] {
            for _ in 0..100 {
                let r = random_operator(n, &mut rng);
                let p = 1 + (rng.gen::<u64>() as usize) % (n - 2);
                let q = random_orthonormal_frame(n, &mut rng);
                let frame = PlaneFrame::new(q, p).unwrap();
                let cp = c_p(&r, &frame).unwrap();
                let sp = p_curvature(&r, &frame).unwrap();
                let scal = r.scalar();
                assert!((cp - (scal / 2.0 - sp / 2.0)).abs() <= 1e-9 * (1.0 + scal.abs()));
            }
        }
    }

    #[test]
    fn space_form_p_curvature_count() {
        let n = 6;
        let r = space_form(n, 1.0).unwrap();
        let frame = PlaneFrame::coordinate(n, &[0, 1]).unwrap();
        let sp = p_curvature(&r, &frame).unwrap();
        let expect = ((n - 2) * (n - 3)) as f64;
        assert!((sp - expect).abs() < 1e-12);
    }

    #[test]
    fn c_p_min_space_form() {
        for &(n, p) in &[(4usize, 1usize), (4, 2), (5, 2)] {
            let r = space_form(n, 1.0).unwrap();
            let out = c_p_min(&r, p, 50, 7).unwrap();
            let expect = (p * (2 * n - p - 1)) as f64 / 2.0;
            assert!((out.value - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn c_p_min_attained_at_torus_plane() {
        let r = product(&space_form(2, 1.0).unwrap(), &space_form(2, 0.0).unwrap()).unwrap();
        let out = c_p_min(&r, 2, 200, 3).unwrap();
        assert!(out.value.abs() < 1e-9);
    }

    #[test]
    fn c_p_min_monotone_in_samples() {
        let mut rng = seeded_rng(10, 0);
        let r = random_operator(5, &mut rng);
        let a = c_p_min(&r, 2, 10, 99).unwrap();
        let b = c_p_min(&r, 2, 200, 99).unwrap();
        assert!(b.value <= a.value + 1e-15);
    }

    #[test]
    fn conformal_coupling_values() {
        assert_eq!(conformal_coupling(0.0, 5).unwrap(), 0.0);
        // n = 4, t = 3 -> 36/12 = 3
        assert!((conformal_coupling(3.0, 4).unwrap() - 3.0).abs() < 1e-12);
        // closed form at t = (n-1)(n-2p)/2 on a grid of (n, p)
        for n in 3..=8usize {
            for p in 1..=(n - 1) / 2 {
                let nf = n as f64;
                let pf = p as f64;
                let t = (nf - 1.0) * (nf - 2.0 * pf) / 2.0;
                let expect = (nf - 1.0) * (nf - 2.0 * pf) / (nf - pf - 1.0);
                assert!((conformal_coupling(t, n).unwrap() - expect).abs() < 1e-9);
            }
        }
        // singular denominator
        let n = 4;
        let t = -(3.0 * 2.0) / 2.0;
        assert!(matches!(
            conformal_coupling(t, n),
            Err(CurvError::SingularCoupling { .. })
        ));
    }

    #[test]
    fn conformal_identity_vanishes() {
        // multiples of g: both sides proportional to g^2
        let a = SymmetricTwoTensor::identity(5).scale(0.7);
        assert!(conformal_identity_check(&a, 2.0).unwrap() < 1e-10);

        // random diagonal Schouten tensors
        let mut rng = seeded_rng(12, 0);
        for _ in 0..30 {
            let diag: Vec<f64> = (0..5).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let a = SymmetricTwoTensor::from_diagonal(&diag);
            let res = conformal_identity_check(&a, 2.0).unwrap();
            assert!(res <= conformal_identity_scale(&a, 2.0));
        }

        // block Schouten of an S^3 x H^1 type
        let a = SymmetricTwoTensor::from_diagonal(&[0.5, 0.5, 0.5, -0.5]);
        assert!(conformal_identity_check(&a, 1.5).unwrap() <= 1e-10);
    }
}
