//! Constructors for the model curvature operators: space forms, Riemannian
//! products, projective spaces, cylinders, conformally flat operators, and
//! the closed-form Berger geodesic-sphere families.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{CurvError, Result};
use crate::operator::{kulkarni_nomizu, CurvatureOperator};
use crate::tensor::SymmetricTwoTensor;

/// Serializable description of a model operator or Berger family member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params")]
pub enum ModelSpec {
    /// Constant sectional curvature κ in dimension n.
    SpaceForm { n: usize, kappa: f64 },
    /// Riemannian product of the listed factors.
    Product { factors: Vec<ModelSpec> },
    /// Complex projective space of complex dimension n, holomorphic
    /// sectional curvature 4.
    FubiniStudyCP { n: usize },
    /// Quaternionic projective space of quaternionic dimension n, maximal
    /// sectional curvature 4.
    FubiniStudyHP { n: usize },
    /// S^{q-1} × R^{n-q+1}, the codimension-q surgery model.
    Cylinder { q: usize, n: usize },
    /// Geodesic sphere of radius r in complex projective space (Berger
    /// metric); closed-form invariant only, no operator.
    BergerCPFamily { n: usize, r: f64 },
    /// Geodesic sphere of radius r in complex hyperbolic space.
    BergerCHFamily { n: usize, r: f64 },
}

impl ModelSpec {
    /// Real dimension of the underlying space.
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::SpaceForm { n, .. } => *n,
            ModelSpec::Product { factors } => factors.iter().map(|f| f.dim()).sum(),
            ModelSpec::FubiniStudyCP { n } => 2 * n,
            ModelSpec::FubiniStudyHP { n } => 4 * n,
            ModelSpec::Cylinder { n, .. } => *n,
            ModelSpec::BergerCPFamily { n, .. } | ModelSpec::BergerCHFamily { n, .. } => 2 * n - 1,
        }
    }

    /// Builds the curvature operator. Berger families have no operator
    /// (only the closed-form invariant) and are rejected here.
    pub fn operator(&self) -> Result<CurvatureOperator> {
        match self {
            ModelSpec::SpaceForm { n, kappa } => space_form(*n, *kappa),
            ModelSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(CurvError::Domain("empty product".into()));
                }
                let mut ops = factors.iter().map(|f| f.operator());
                let first = ops.next().expect("nonempty")?;
                ops.try_fold(first, |acc, next| product(&acc, &next?))
            }
            ModelSpec::FubiniStudyCP { n } => fubini_study_cp(*n),
            ModelSpec::FubiniStudyHP { n } => fubini_study_hp(*n),
            ModelSpec::Cylinder { q, n } => cylinder(*q, *n),
            ModelSpec::BergerCPFamily { .. } | ModelSpec::BergerCHFamily { .. } => {
                Err(CurvError::Domain(
                    "Berger families carry a closed-form invariant, not an operator".into(),
                ))
            }
        }
    }
}

/// κ·Id on Λ²Rⁿ. Dimension 1 is allowed and yields the empty operator
/// (a line has no 2-planes); curved factors need n ≥ 2.
pub fn space_form(n: usize, kappa: f64) -> Result<CurvatureOperator> {
    if n == 0 {
        return Err(CurvError::Domain("space form needs dimension >= 1".into()));
    }
    if !kappa.is_finite() {
        return Err(CurvError::Domain("curvature must be finite".into()));
    }
    Ok(CurvatureOperator::scaled_identity(n, kappa))
}

/// Block operator of a Riemannian product: factor bivectors keep their
/// factor operators, mixed bivectors are exact zeros.
pub fn product(r1: &CurvatureOperator, r2: &CurvatureOperator) -> Result<CurvatureOperator> {
    let n1 = r1.dim();
    let n = n1 + r2.dim();
    Ok(CurvatureOperator::from_components(n, |i, j, k, l| {
        let in1 = |x: usize| x < n1;
        match (in1(i), in1(j), in1(k), in1(l)) {
            (true, true, true, true) => r1.component(i, j, k, l),
            (false, false, false, false) => r2.component(i - n1, j - n1, k - n1, l - n1),
            _ => 0.0,
        }
    }))
}

/// S^{q-1} × R^{n-q+1} with the unit round sphere factor.
pub fn cylinder(q: usize, n: usize) -> Result<CurvatureOperator> {
    if q < 3 || q > n {
        return Err(CurvError::Domain(format!(
            "cylinder needs 3 <= q <= n, got q = {q}, n = {n}"
        )));
    }
    let sphere = space_form(q - 1, 1.0)?;
    let flat = space_form(n - q + 1, 0.0)?;
    product(&sphere, &flat)
}

/// Standard complex structure on R^{2n}: J e_{2k} = e_{2k+1}.
fn complex_structure(real_dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(real_dim, real_dim);
    for k in 0..real_dim / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

/// Curvature operator of CP^n (complex dimension n) with the Fubini–Study
/// metric normalized to holomorphic sectional curvature 4, so that
/// `Scal = 4n(n+1)` and `λ_max = 2n+2`.
pub fn fubini_study_cp(n: usize) -> Result<CurvatureOperator> {
    if n == 0 {
        return Err(CurvError::Domain("CP^n needs n >= 1".into()));
    }
    let m = 2 * n;
    let j = complex_structure(m);
    Ok(holomorphic_type_operator(m, &[j]))
}

/// Quaternion structure on R^{4n}: left multiplication by i, j, k on each
/// H-coordinate block, so I J = K and the three anticommute.
fn quaternion_structures(real_dim: usize) -> [DMatrix<f64>; 3] {
    let mut qi = DMatrix::zeros(real_dim, real_dim);
    let mut qj = DMatrix::zeros(real_dim, real_dim);
    let mut qk = DMatrix::zeros(real_dim, real_dim);
    for b in 0..real_dim / 4 {
        let o = 4 * b;
        // I: 1 -> i, i -> -1, j -> k, k -> -j
        qi[(o + 1, o)] = 1.0;
        qi[(o, o + 1)] = -1.0;
        qi[(o + 3, o + 2)] = 1.0;
        qi[(o + 2, o + 3)] = -1.0;
        // J: 1 -> j, i -> -k, j -> -1, k -> i
        qj[(o + 2, o)] = 1.0;
        qj[(o, o + 2)] = -1.0;
        qj[(o + 3, o + 1)] = -1.0;
        qj[(o + 1, o + 3)] = 1.0;
        // K: 1 -> k, i -> j, j -> -i, k -> -1
        qk[(o + 3, o)] = 1.0;
        qk[(o, o + 3)] = -1.0;
        qk[(o + 2, o + 1)] = 1.0;
        qk[(o + 1, o + 2)] = -1.0;
    }
    [qi, qj, qk]
}

/// Curvature operator of HP^n (quaternionic dimension n) normalized so
/// that `Scal = 16n(n+2)` and `λ_max = 4n`.
pub fn fubini_study_hp(n: usize) -> Result<CurvatureOperator> {
    if n == 0 {
        return Err(CurvError::Domain("HP^n needs n >= 1".into()));
    }
    let m = 4 * n;
    let structures = quaternion_structures(m);
    Ok(holomorphic_type_operator(m, &structures))
}

/// The constant-holomorphic-curvature tensor for a family of anticommuting
/// orthogonal complex structures A:
/// `R(X,Y,Z,W) = ⟨X,Z⟩⟨Y,W⟩ − ⟨X,W⟩⟨Y,Z⟩
///   + Σ_A (⟨AX,Z⟩⟨AY,W⟩ − ⟨AX,W⟩⟨AY,Z⟩ + 2⟨AX,Y⟩⟨AZ,W⟩)`.
///
/// One structure gives CP^{m/2}, three give HP^{m/4}; both with extremal
/// sectional curvature 4.
fn holomorphic_type_operator(m: usize, structures: &[DMatrix<f64>]) -> CurvatureOperator {
    CurvatureOperator::from_components(m, |i, j, k, l| {
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        let mut v = delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k);
        for a in structures {
            // ⟨A e_x, e_y⟩ = A[(y, x)]
            v += a[(k, i)] * a[(l, j)] - a[(l, i)] * a[(k, j)] + 2.0 * a[(j, i)] * a[(l, k)];
        }
        v
    })
}

/// Riem of the geodesic sphere of radius r in CP^n (Fubini–Study ambient):
/// `(4n(n−1) + (2n−2)(2n−1)cot²r) / (4n + 2cot²r)`, for 0 < r < π/2.
pub fn berger_cp_riem(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(CurvError::Domain("Berger CP family needs n >= 2".into()));
    }
    if !(r > 0.0 && r < std::f64::consts::FRAC_PI_2) {
        return Err(CurvError::Domain(format!(
            "radius must lie in (0, pi/2), got {r}"
        )));
    }
    let nf = n as f64;
    let c2 = {
        let c = 1.0 / r.tan();
        c * c
    };
    Ok((4.0 * nf * (nf - 1.0) + (2.0 * nf - 2.0) * (2.0 * nf - 1.0) * c2) / (4.0 * nf + 2.0 * c2))
}

/// Riem of the geodesic sphere of radius r in CH^n:
/// `−2n(n−1)tanh²r + (n−1)(2n−1)`, for r > 0.
pub fn berger_ch_riem(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(CurvError::Domain("Berger CH family needs n >= 2".into()));
    }
    if r <= 0.0 {
        return Err(CurvError::Domain(format!("radius must be positive, got {r}")));
    }
    let nf = n as f64;
    let t2 = r.tanh() * r.tanh();
    Ok(-2.0 * nf * (nf - 1.0) * t2 + (nf - 1.0) * (2.0 * nf - 1.0))
}

/// Curvature operator of a conformally flat structure with Schouten-like
/// tensor A: the Kulkarni–Nomizu product g ∧ A.
pub fn conformally_flat(a: &SymmetricTwoTensor) -> Result<CurvatureOperator> {
    let g = SymmetricTwoTensor::identity(a.dim());
    kulkarni_nomizu(&g, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::bianchi_defect;
    use nalgebra::dvector;

    #[test]
    fn space_form_values() {
        let r = space_form(3, -1.0).unwrap();
        assert!((r.scalar() + 6.0).abs() < 1e-12);
        let flat = space_form(5, 0.0).unwrap();
        assert_eq!(flat.norm(), 0.0);
        let line = space_form(1, 0.0).unwrap();
        assert_eq!(line.bivector_dim(), 0);
        assert!(space_form(0, 1.0).is_err());
    }

    #[test]
    fn product_block_spectrum() {
        let s = space_form(3, 1.0).unwrap();
        let t = space_form(2, 0.0).unwrap();
        let st = product(&s, &t).unwrap();
        assert_eq!(st.dim(), 5);
        let evs = st.spectrum();
        let ones = evs.eigenvalues().iter().filter(|&&l| (l - 1.0).abs() < 1e-12).count();
        let zeros = evs.eigenvalues().iter().filter(|&&l| l.abs() < 1e-12).count();
        assert_eq!(ones, 3);
        assert_eq!(zeros, 7);
        assert!((st.scalar() - 6.0).abs() < 1e-12);

        // Scal adds: S^{n-p} x H^p gives (n-p)(n-p-1) - p(p-1) = (n-1)(n-2p)
        let sh = product(
            &space_form(3, 1.0).unwrap(),
            &space_form(2, -1.0).unwrap(),
        )
        .unwrap();
        assert!((sh.scalar() - 4.0).abs() < 1e-12);
        assert!(bianchi_defect(&sh) < 1e-12);

        // mixed plane of a product is flat
        let u = dvector![1.0, 0.0, 0.0, 0.0, 0.0];
        let v = dvector![0.0, 0.0, 0.0, 1.0, 0.0];
        assert!(sh.sectional(&u, &v).unwrap().abs() < 1e-12);
    }

    #[test]
    fn product_with_line_factor() {
        // q = n cylinder: S^{n-1} x R has the round-sphere block only
        let c = cylinder(4, 4).unwrap();
        assert_eq!(c.dim(), 4);
        let spec = c.spectrum();
        let ones = spec.eigenvalues().iter().filter(|&&l| (l - 1.0).abs() < 1e-12).count();
        assert_eq!(ones, 3); // C(3,2)
        assert!((c.scalar() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn cylinder_values() {
        let c = cylinder(3, 5).unwrap();
        assert!((c.scalar() - 2.0).abs() < 1e-12);
        assert!((c.spectrum().lambda_max() - 1.0).abs() < 1e-12);
        assert!(cylinder(2, 5).is_err());
        assert!(cylinder(6, 5).is_err());
    }

    #[test]
    fn cp1_is_round_sphere_of_curvature_4() {
        let r = fubini_study_cp(1).unwrap();
        assert_eq!(r.bivector_dim(), 1);
        assert!((r.matrix()[(0, 0)] - 4.0).abs() < 1e-12);
        assert!((r.scalar() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn cp_paper_normalization() {
        for n in 1..=3usize {
            let r = fubini_study_cp(n).unwrap();
            let nf = n as f64;
            assert!(bianchi_defect(&r) < 1e-12 * (1.0 + r.norm()));
            assert!((r.scalar() - 4.0 * nf * (nf + 1.0)).abs() < 1e-9);
            assert!((r.spectrum().lambda_max() - (2.0 * nf + 2.0)).abs() < 1e-9);
        }
        // holomorphic plane has sectional curvature 4
        let r = fubini_study_cp(3).unwrap();
        let mut u = nalgebra::DVector::zeros(6);
        let mut v = nalgebra::DVector::zeros(6);
        u[2] = 1.0;
        v[3] = 1.0; // J e_2 = e_3
        assert!((r.sectional(&u, &v).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn hp_paper_normalization() {
        for n in 1..=2usize {
            let r = fubini_study_hp(n).unwrap();
            let nf = n as f64;
            assert!(bianchi_defect(&r) < 1e-12 * (1.0 + r.norm()));
            assert!((r.scalar() - 16.0 * nf * (nf + 2.0)).abs() < 1e-9);
            assert!((r.spectrum().lambda_max() - 4.0 * nf).abs() < 1e-9);
        }
    }

    #[test]
    fn projective_spaces_are_einstein() {
        for r in [fubini_study_cp(2).unwrap(), fubini_study_hp(2).unwrap()] {
            let ric = r.ricci();
            let scal = r.scalar();
            let n = r.dim() as f64;
            let dev = ric
                .add_scaled(&SymmetricTwoTensor::identity(r.dim()), -scal / n)
                .unwrap();
            assert!(dev.norm() <= 1e-9 * scal);
        }
    }

    #[test]
    fn berger_formulas() {
        // direct substitutions
        let v = berger_cp_riem(2, (0.5f64).atan()).unwrap(); // cot^2 r = 4
        assert!((v - 2.0).abs() < 1e-12);
        let v = berger_ch_riem(2, (0.5f64).sqrt().atanh()).unwrap(); // tanh^2 r = 1/2
        assert!((v - 1.0).abs() < 1e-12);
        // domain checks
        assert!(berger_cp_riem(2, 0.0).is_err());
        assert!(berger_cp_riem(2, 1.6).is_err());
        assert!(berger_ch_riem(2, -1.0).is_err());
    }

    #[test]
    fn berger_monotone_decreasing() {
        let grid = 1000;
        let mut prev = f64::INFINITY;
        for k in 1..=grid {
            let r = std::f64::consts::FRAC_PI_2 * (k as f64) / (grid as f64 + 1.0);
            let v = berger_cp_riem(3, r).unwrap();
            assert!(v < prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for k in 1..=grid {
            let r = 3.0 * (k as f64) / (grid as f64);
            let v = berger_ch_riem(3, r).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn conformally_flat_matches_models() {
        // A = (κ/2) g reproduces the space form
        let n = 4;
        let a = SymmetricTwoTensor::identity(n).scale(1.5);
        let r = conformally_flat(&a).unwrap();
        let expect = space_form(n, 3.0).unwrap();
        assert!((r.matrix() - expect.matrix()).norm() < 1e-12);

        // Schouten of S^3 x H^2: diag(1/2, 1/2, 1/2, -1/2, -1/2)
        let a = SymmetricTwoTensor::from_diagonal(&[0.5, 0.5, 0.5, -0.5, -0.5]);
        let r = conformally_flat(&a).unwrap();
        let expect = product(
            &space_form(3, 1.0).unwrap(),
            &space_form(2, -1.0).unwrap(),
        )
        .unwrap();
        assert!((r.matrix() - expect.matrix()).norm() < 1e-12);
    }

    #[test]
    fn product_associative_up_to_spectrum() {
        let a = space_form(2, 1.0).unwrap();
        let b = space_form(2, -1.0).unwrap();
        let c = space_form(2, 0.5).unwrap();
        let left = product(&product(&a, &b).unwrap(), &c).unwrap();
        let right = product(&a, &product(&b, &c).unwrap()).unwrap();
        let ls = left.spectrum();
        let rs = right.spectrum();
        for (x, y) in ls.eigenvalues().iter().zip(rs.eigenvalues()) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn model_spec_serde_round_trip() {
        let spec = ModelSpec::Product {
            factors: vec![
                ModelSpec::SpaceForm { n: 3, kappa: 1.0 },
                ModelSpec::SpaceForm { n: 2, kappa: 0.0 },
            ],
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\""));
        assert!(json.contains("\"params\""));
        let back: ModelSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        assert_eq!(spec.dim(), 5);
    }
}
