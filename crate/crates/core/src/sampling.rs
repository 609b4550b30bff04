//! Seeded random generation of test operators and orthonormal frames.
//!
//! Reproducibility contract: every sampler is a pure function of
//! `(seed, stream)`. Parallel consumers draw from distinct streams of the
//! same counter-based generator instead of sharing one.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operator::{bianchi_project, CurvatureOperator};

/// Counter-based generator for the given (seed, stream) pair.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Symmetric N×N matrix with independent standard-normal entries (upper
/// triangle sampled, mirrored). Not Bianchi in general.
pub fn random_symmetric_operator<R: Rng>(n: usize, rng: &mut R) -> CurvatureOperator {
    let nn = n * (n - 1) / 2;
    let mut m = DMatrix::zeros(nn, nn);
    for a in 0..nn {
        for b in a..nn {
            let v: f64 = rng.sample(StandardNormal);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    CurvatureOperator::from_matrix(n, m).expect("constructed symmetric")
}

/// Bianchi-projected Gaussian operator: the test-suite workhorse.
pub fn random_operator<R: Rng>(n: usize, rng: &mut R) -> CurvatureOperator {
    bianchi_project(&random_symmetric_operator(n, rng))
}

/// Gaussian operator shifted towards the identity: `c·Id + ε·G` with
/// c > 0. Samples from this family populate the high-`Riem` region that
/// pure Gaussian draws essentially never reach.
pub fn random_shifted_operator<R: Rng>(
    n: usize,
    shift: f64,
    noise: f64,
    rng: &mut R,
) -> CurvatureOperator {
    let g = random_operator(n, rng);
    CurvatureOperator::scaled_identity(n, shift)
        .add_scaled(&g, noise)
        .expect("same dimension")
}

/// A varied ensemble for property suites: alternating pure Gaussian draws
/// and identity-shifted ones, so both signs of scalar curvature and the
/// high-`Riem` region get populated.
pub fn mixed_ensemble(n: usize, count: usize, seed: u64) -> Vec<CurvatureOperator> {
    let mut rng = seeded_rng(seed, n as u64);
    (0..count)
        .map(|k| {
            if k % 2 == 0 {
                random_operator(n, &mut rng)
            } else {
                let shift = 0.1 + rng.gen::<f64>() * 1.9;
                let noise = 0.02 + rng.gen::<f64>() * 0.68;
                random_shifted_operator(n, shift, noise, &mut rng)
            }
        })
        .collect()
}

/// Haar-ish random orthonormal frame: Gaussian n×n matrix, then QR. Columns
/// of the returned matrix are the frame vectors.
pub fn random_orthonormal_frame<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    loop {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.sample(StandardNormal);
            }
        }
        let qr = m.qr();
        let q = qr.q();
        // QR of a Gaussian matrix is full-rank almost surely; retry if not.
        if (q.transpose() * &q - DMatrix::identity(n, n)).norm() < 1e-9 {
            return q;
        }
    }
}
