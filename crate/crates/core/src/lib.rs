//! Numerical and exact algebra for curvature operators on a Euclidean
//! vector space, the spectral scalar-curvature invariants built from them,
//! Weitzenböck curvature terms on p-forms, and a rule engine that derives
//! rational bounds on the smooth `Riem` invariant of constructed manifolds.
//!
//! Everything lives in a fixed orthonormal frame: the metric is the
//! identity, a curvature operator is a symmetric matrix over the
//! lexicographic bivector basis of `Λ²Rⁿ`, and the diagonal entry at a
//! coordinate plane is that plane's sectional curvature.

pub mod bivector;
pub mod engine;
pub mod error;
pub mod invariants;
pub mod models;
pub mod operator;
pub mod pforms;
pub mod sampling;
pub mod tensor;
pub mod verify;

pub use bivector::BivectorIndex;
pub use error::CurvError;
pub use invariants::{
    c_p, c_p_min, conformal_coupling, conformal_identity_check, p_curvature, riem_pointwise,
    riem_pointwise_with_tol, riem_small_pointwise, riem_small_pointwise_with_tol, riem_t,
    CpMinResult, PlaneFrame, RiemSmall,
};
pub use models::ModelSpec;
pub use operator::{
    bianchi_defect, bianchi_project, kulkarni_nomizu, CurvatureOperator, SigmaInvariants, Spectrum,
};
pub use pforms::{lift, vanishing_witness, weitzenbock, weitzenbock_identity_residual, DoubleForm, PFormOperator};
pub use tensor::SymmetricTwoTensor;

/// Base relative tolerance used by positivity predicates and residual
/// contracts: a quantity counts as zero below `TOL_BASE * (1 + scale)`.
pub const TOL_BASE: f64 = 1e-9;

/// Scale-aware tolerance.
pub fn tol_for(scale: f64) -> f64 {
    TOL_BASE * (1.0 + scale.abs())
}
