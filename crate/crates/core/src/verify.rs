//! Deterministic verification suites behind the CLI `verify` subcommand.
//!
//! Each suite returns structured check results so callers can render them
//! or assert on them; everything is a pure function of the seed.

use rand::Rng;

use crate::engine::{infer, parse};
use crate::invariants::{
    c_p, conformal_identity_check, conformal_identity_scale, riem_t, PlaneFrame,
};
use crate::models::{
    berger_ch_riem, berger_cp_riem, fubini_study_cp, fubini_study_hp, product, space_form,
};
use crate::operator::{bianchi_defect, bianchi_project, kulkarni_nomizu, CurvatureOperator};
use crate::pforms::{lift, weitzenbock, weitzenbock_identity_residual, DoubleForm};
use crate::sampling::{
    random_operator, random_orthonormal_frame, random_shifted_operator, random_symmetric_operator,
    seeded_rng,
};
use crate::tensor::SymmetricTwoTensor;
use crate::tol_for;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn ok(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: true,
            detail: detail.into(),
        }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass: false,
            detail: detail.into(),
        }
    }

    fn from_count(name: impl Into<String>, failures: usize, total: usize) -> Self {
        let name = name.into();
        if failures == 0 {
            Check::ok(name, format!("{total} cases"))
        } else {
            Check::fail(name, format!("{failures} of {total} cases failed"))
        }
    }
}

pub fn suite_names() -> &'static [&'static str] {
    &["core", "models", "weitzenbock", "engine", "all"]
}

pub fn run_suite(name: &str, seed: u64) -> Option<Vec<Check>> {
    match name {
        "core" => Some(core_suite(seed)),
        "models" => Some(models_suite()),
        "weitzenbock" => Some(weitzenbock_suite(seed)),
        "engine" => Some(engine_suite()),
        "all" => {
            let mut out = core_suite(seed);
            out.extend(models_suite());
            out.extend(weitzenbock_suite(seed));
            out.extend(engine_suite());
            Some(out)
        }
        _ => None,
    }
}

/// Bivector index, Kulkarni–Nomizu, Bianchi projection, trace identities,
/// Γ₂ ⇒ Newton positivity.
pub fn core_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();

    // index round trips
    let mut failures = 0;
    let mut total = 0;
    for n in 2..=10usize {
        let idx = crate::bivector::BivectorIndex::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                total += 1;
                let k = idx.index(i, j).unwrap();
                if idx.pair(k).unwrap() != (i, j) {
                    failures += 1;
                }
            }
        }
    }
    checks.push(Check::from_count("bivector index round trip", failures, total));

    // KN symmetry + Bianchi on random tensors
    let mut rng = seeded_rng(seed, 10);
    let mut failures = 0;
    let total = 50;
    for _ in 0..total {
        let n = 4 + (rng.gen::<u64>() % 2) as usize;
        let h = random_two_tensor(n, &mut rng);
        let k = random_two_tensor(n, &mut rng);
        let hk = kulkarni_nomizu(&h, &k).unwrap();
        let kh = kulkarni_nomizu(&k, &h).unwrap();
        let scale = 1.0 + hk.norm();
        if (hk.matrix() - kh.matrix()).norm() > 1e-12 * scale
            || bianchi_defect(&hk) > 1e-12 * scale
        {
            failures += 1;
        }
    }
    checks.push(Check::from_count("Kulkarni-Nomizu symmetry and Bianchi", failures, total));

    // projection idempotency + trace identity
    let mut rng = seeded_rng(seed, 11);
    let mut failures = 0;
    let total = 50;
    for _ in 0..total {
        let n = 4 + (rng.gen::<u64>() % 2) as usize;
        let s = random_symmetric_operator(n, &mut rng);
        let p1 = bianchi_project(&s);
        let p2 = bianchi_project(&p1);
        let scal_ok = (2.0 * p1.matrix().trace() - p1.scalar()).abs()
            <= 1e-9 * (1.0 + p1.scalar().abs());
        if (p1.matrix() - p2.matrix()).norm() > 1e-12 * (1.0 + p1.norm())
            || bianchi_defect(&p1) > 1e-12 * (1.0 + s.norm())
            || !scal_ok
        {
            failures += 1;
        }
    }
    checks.push(Check::from_count("Bianchi projection idempotent, trace = Scal/2", failures, total));

    // spectrum sums match traces
    let mut rng = seeded_rng(seed, 12);
    let mut failures = 0;
    let total = 50;
    for _ in 0..total {
        let r = random_operator(5, &mut rng);
        let sum: f64 = r.spectrum().eigenvalues().iter().sum();
        let tr = r.matrix().trace();
        if (sum - tr).abs() > 1e-9 * (1.0 + tr.abs()) {
            failures += 1;
        }
    }
    checks.push(Check::from_count("eigenvalue sum equals trace", failures, total));

    // Γ₂ ⇒ first Newton transformation positive definite
    let mut rng = seeded_rng(seed, 13);
    let mut failures = 0;
    let mut accepted = 0;
    while accepted < 500 {
        let n = 4 + (accepted % 2);
        let shift = 0.2 + rng.gen::<f64>() * 1.3;
        let noise = 0.05 + rng.gen::<f64>() * 0.45;
        let r = random_shifted_operator(n, shift, noise, &mut rng);
        let s = r.sigma_invariants();
        if !s.gamma2 {
            continue;
        }
        accepted += 1;
        let min_eig = r.newton_t1().spectrum().lambda_min();
        if min_eig <= 0.0 {
            failures += 1;
        }
    }
    checks.push(Check::from_count("Gamma_2 implies Newton t1 positive", failures, accepted));

    checks
}

fn random_two_tensor<R: Rng>(n: usize, rng: &mut R) -> SymmetricTwoTensor {
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.sample(rand_distr::StandardNormal);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymmetricTwoTensor::new(m).expect("constructed symmetric")
}

/// Model constructors against their pinned spectral data.
pub fn models_suite() -> Vec<Check> {
    let mut checks = Vec::new();

    for n in 1..=4usize {
        let r = fubini_study_cp(n).unwrap();
        let nf = n as f64;
        let scal_ok = (r.scalar() - 4.0 * nf * (nf + 1.0)).abs() <= 1e-9;
        let lmax_ok = (r.spectrum().lambda_max() - (2.0 * nf + 2.0)).abs() <= 1e-9;
        checks.push(if scal_ok && lmax_ok {
            Check::ok(
                format!("CP({n}) normalization"),
                format!("Scal = {}, lambda_max = {}", r.scalar(), r.spectrum().lambda_max()),
            )
        } else {
            Check::fail(
                format!("CP({n}) normalization"),
                format!("Scal = {}, lambda_max = {}", r.scalar(), r.spectrum().lambda_max()),
            )
        });
    }

    for n in 1..=3usize {
        let r = fubini_study_hp(n).unwrap();
        let nf = n as f64;
        let scal_ok = (r.scalar() - 16.0 * nf * (nf + 2.0)).abs() <= 1e-9;
        let lmax_ok = (r.spectrum().lambda_max() - 4.0 * nf).abs() <= 1e-9;
        checks.push(if scal_ok && lmax_ok {
            Check::ok(
                format!("HP({n}) normalization"),
                format!("Scal = {}, lambda_max = {}", r.scalar(), r.spectrum().lambda_max()),
            )
        } else {
            Check::fail(
                format!("HP({n}) normalization"),
                format!("Scal = {}, lambda_max = {}", r.scalar(), r.spectrum().lambda_max()),
            )
        });
    }

    // Einstein property
    let mut failures = 0;
    let mut total = 0;
    for r in [fubini_study_cp(2).unwrap(), fubini_study_cp(3).unwrap(), fubini_study_hp(2).unwrap()] {
        total += 1;
        let scal = r.scalar();
        let dev = r
            .ricci()
            .add_scaled(&SymmetricTwoTensor::identity(r.dim()), -scal / r.dim() as f64)
            .unwrap();
        if dev.norm() > 1e-9 * scal {
            failures += 1;
        }
    }
    checks.push(Check::from_count("projective spaces are Einstein", failures, total));

    // constructor outputs are Bianchi
    let mut failures = 0;
    let mut total = 0;
    let models: Vec<CurvatureOperator> = vec![
        space_form(5, 1.0).unwrap(),
        space_form(4, -2.0).unwrap(),
        product(&space_form(3, 1.0).unwrap(), &space_form(2, 0.0).unwrap()).unwrap(),
        crate::models::cylinder(3, 6).unwrap(),
        fubini_study_cp(3).unwrap(),
        fubini_study_hp(2).unwrap(),
    ];
    for r in &models {
        total += 1;
        if bianchi_defect(r) > 1e-12 * (1.0 + r.norm()) {
            failures += 1;
        }
    }
    checks.push(Check::from_count("constructors satisfy Bianchi", failures, total));

    // Berger families decrease in r
    let mut failures = 0;
    let grid = 1000;
    for n in [2usize, 3] {
        let mut prev = f64::INFINITY;
        for k in 1..=grid {
            let r = std::f64::consts::FRAC_PI_2 * (k as f64) / (grid as f64 + 1.0);
            let v = berger_cp_riem(n, r).unwrap();
            if v >= prev {
                failures += 1;
            }
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for k in 1..=grid {
            let r = 4.0 * (k as f64) / (grid as f64);
            let v = berger_ch_riem(n, r).unwrap();
            if v >= prev {
                failures += 1;
            }
            prev = v;
        }
    }
    checks.push(Check::from_count("Berger families strictly decreasing", failures, 2 * 2 * grid));

    checks
}

/// Lift normalization, the curvature-term identity, and Hodge symmetry.
pub fn weitzenbock_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();

    // lift(1, p) = Id
    let mut failures = 0;
    let mut total = 0;
    for n in 2..=6usize {
        for p in 1..=3.min(n) {
            total += 1;
            let id = lift(&DoubleForm::Scalar(1.0), p, n).unwrap();
            let k = id.matrix().nrows();
            if (id.matrix() - nalgebra::DMatrix::identity(k, k)).norm() > 1e-12 {
                failures += 1;
            }
        }
    }
    checks.push(Check::from_count("lift(1, p) = Id", failures, total));

    // W_1 = Ric
    let mut rng = seeded_rng(seed, 20);
    let mut failures = 0;
    let total = 20;
    for _ in 0..total {
        let r = random_operator(5, &mut rng);
        if (weitzenbock(&r, 1).unwrap().matrix() - r.ricci().matrix()).norm()
            > 1e-12 * (1.0 + r.norm())
        {
            failures += 1;
        }
    }
    checks.push(Check::from_count("W_1 = Ric", failures, total));

    // space-form W_p = p(n-p) kappa Id
    let mut failures = 0;
    let mut total = 0;
    for &(n, p) in &[(4usize, 2usize), (5, 2)] {
        total += 1;
        let r = space_form(n, 1.0).unwrap();
        let w = weitzenbock(&r, p).unwrap();
        let k = w.matrix().nrows();
        let expect = (p * (n - p)) as f64;
        if (w.matrix() - nalgebra::DMatrix::identity(k, k) * expect).norm() > 1e-12 {
            failures += 1;
        }
    }
    checks.push(Check::from_count("space-form W_p = p(n-p) kappa Id", failures, total));

    // identity residual on 100 random triples
    let mut rng = seeded_rng(seed, 21);
    let mut failures = 0;
    let total = 100;
    for _ in 0..total {
        let n = 4 + (rng.gen::<u64>() % 3) as usize;
        let r = random_operator(n, &mut rng);
        let t = 0.5 + rng.gen::<f64>() * 4.0;
        let p_max = (n - 1).min(4);
        let p = 2 + (rng.gen::<u64>() as usize) % (p_max - 1);
        let res = weitzenbock_identity_residual(&r, t, p).unwrap();
        if res > 1e-9 * (1.0 + t * r.norm()) {
            failures += 1;
        }
    }
    checks.push(Check::from_count("curvature-term identity residual", failures, total));

    // Hodge symmetry on models
    let mut failures = 0;
    let mut total = 0;
    let models = [
        space_form(5, 1.0).unwrap(),
        product(&space_form(3, 1.0).unwrap(), &space_form(2, 0.0).unwrap()).unwrap(),
    ];
    for r in &models {
        let n = r.dim();
        for p in 1..n {
            if p > 4 || n - p > 4 {
                continue;
            }
            total += 1;
            let a = weitzenbock(r, p).unwrap().eigenvalues();
            let b = weitzenbock(r, n - p).unwrap().eigenvalues();
            if a
                .iter()
                .zip(&b)
                .any(|(x, y)| (x - y).abs() > 1e-9 * (1.0 + x.abs()))
            {
                failures += 1;
            }
        }
    }
    checks.push(Check::from_count("Hodge symmetry of W_p spectra", failures, total));

    checks
}

/// Engine oracle table and determinism.
pub fn engine_suite() -> Vec<Check> {
    let mut checks = Vec::new();

    let oracle: &[(&str, i64)] = &[
        ("sphere(3)", 3),
        ("sphere(5)", 10),
        ("rp(6)", 15),
        ("connsum(rp(4), rp(4))", 3),
        ("connsum(rp(5), connsum(rp(5), rp(5)))", 6),
        ("product(sphere(4), circle)", 6),
        ("product(sphere(2), torus(2))", 1),
        ("product(sphere(2), torus(5))", 1),
        ("connsum(product(sphere(3), circle), product(sphere(3), circle))", 3),
    ];
    let mut failures = 0;
    for (src, expect) in oracle {
        let iv = infer(&parse(src).unwrap()).unwrap();
        let want = crate::engine::interval::Rational::from_integer(*expect);
        if !(iv.is_exact() && iv.lower.value == want) {
            failures += 1;
        }
    }
    checks.push(Check::from_count("engine oracle table", failures, oracle.len()));

    // determinism: identical runs produce identical traces
    let mut failures = 0;
    let corpus = [
        "surgery(sphere(7), 5)",
        "bundle(cp(2), 3)",
        "connsum(product(sphere(2), torus(2)), cp(2))",
    ];
    for src in &corpus {
        let a = infer(&parse(src).unwrap()).unwrap();
        let b = infer(&parse(src).unwrap()).unwrap();
        if a != b {
            failures += 1;
        }
    }
    checks.push(Check::from_count("engine determinism", failures, corpus.len()));

    // gap window: no interval endpoint strictly inside (N-2, N)
    let mut failures = 0;
    let corpus = [
        "sphere(4)",
        "connsum(sphere(4), sphere(4))",
        "surgery(sphere(4), 4)",
        "product(sphere(3), sphere(3))",
        "surgery(sphere(9), 9)",
    ];
    for src in &corpus {
        let iv = infer(&parse(src).unwrap()).unwrap();
        let big_n = crate::engine::interval::choose2(iv.dim);
        let edge = big_n - crate::engine::interval::Rational::from_integer(2);
        let inside = |v: crate::engine::interval::Rational| v > edge && v < big_n;
        if inside(iv.lower.value) || inside(iv.upper.value) {
            failures += 1;
        }
    }
    checks.push(Check::from_count("gap window excluded", failures, corpus.len()));

    checks
}

/// Cross-checks engine exact values against pointwise evaluation of the
/// matching model operators.
pub fn oracle_agreement_cases() -> Vec<(String, CurvatureOperator)> {
    let mut cases = Vec::new();
    for n in 2..=8usize {
        cases.push((format!("sphere({n})"), space_form(n, 1.0).unwrap()));
    }
    // circle products are exact in every dimension
    for n in 3..=8usize {
        let op = product(&space_form(n - 1, 1.0).unwrap(), &space_form(1, 0.0).unwrap()).unwrap();
        cases.push((format!("product(sphere({}), circle)", n - 1), op));
    }
    // torus caps need n <= 7
    for n in 4..=7usize {
        for p in 2..=(n - 2) {
            let op = product(
                &space_form(n - p, 1.0).unwrap(),
                &space_form(p, 0.0).unwrap(),
            )
            .unwrap();
            cases.push((format!("product(sphere({}), torus({p}))", n - p), op));
        }
    }
    cases
}

/// Random-frame spot check used by tests: C_p at coordinate frames equals
/// direct sectional sums.
pub fn c_p_consistency(seed: u64, rounds: usize) -> usize {
    let mut rng = seeded_rng(seed, 30);
    let mut failures = 0;
    for _ in 0..rounds {
        let n = 4 + (rng.gen::<u64>() % 2) as usize;
        let r = random_operator(n, &mut rng);
        let p = 1 + (rng.gen::<u64>() as usize) % (n - 1);
        let q = random_orthonormal_frame(n, &mut rng);
        let frame = PlaneFrame::new(q, p).unwrap();
        let direct = c_p(&r, &frame).unwrap();
        let mut by_hand = 0.0;
        for i in 0..p {
            for j in (i + 1)..n {
                by_hand += r.sectional(&frame.vector(i), &frame.vector(j)).unwrap();
            }
        }
        if (direct - by_hand).abs() > tol_for(r.norm()) {
            failures += 1;
        }
    }
    failures
}

/// Convenience used in a few places: the conformal identity on random
/// diagonal tensors.
pub fn conformal_spotcheck(seed: u64, rounds: usize) -> usize {
    let mut rng = seeded_rng(seed, 31);
    let mut failures = 0;
    for _ in 0..rounds {
        let n = 4 + (rng.gen::<u64>() % 3) as usize;
        let diag: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let a = SymmetricTwoTensor::from_diagonal(&diag);
        let t = rng.gen::<f64>() * 3.0 + 0.5;
        let res = conformal_identity_check(&a, t).unwrap();
        if res > conformal_identity_scale(&a, t) {
            failures += 1;
        }
    }
    failures
}

/// Pointwise threshold of the cylinder model: positivity of `Riem_t` flips
/// exactly at (q-1)(q-2)/2. Returns mismatch count over a t-grid.
pub fn cylinder_threshold_mismatches(q: usize, n: usize, grid: usize) -> usize {
    let op = crate::models::cylinder(q, n).unwrap();
    let threshold = ((q - 1) * (q - 2)) as f64 / 2.0;
    let big_n = (n * (n - 1) / 2) as f64;
    let mut mismatches = 0;
    for k in 0..grid {
        let t = big_n * (k as f64 + 0.5) / grid as f64;
        if (t - threshold).abs() < 1e-6 {
            continue; // exactly at the wall, either answer is fine
        }
        let positive = riem_t(&op, t).is_positive_definite();
        if positive != (t < threshold) {
            mismatches += 1;
        }
    }
    mismatches
}

/// One pass/fail line per check plus a summary; returns overall success.
pub fn render(checks: &[Check], out: &mut String) -> bool {
    let mut passed = 0;
    for c in checks {
        if c.pass {
            passed += 1;
            out.push_str(&format!("ok   {} ({})\n", c.name, c.detail));
        } else {
            out.push_str(&format!("FAIL {} ({})\n", c.name, c.detail));
        }
    }
    out.push_str(&format!("{passed} passed, {} failed\n", checks.len() - passed));
    passed == checks.len()
}
