//! Property tests for the algebra layer and the DSL/engine.

use proptest::prelude::*;

use curvlab_core::bivector::BivectorIndex;
use curvlab_core::engine::interval::choose2;
use curvlab_core::engine::{explain, infer, parse};
use curvlab_core::invariants::{riem_pointwise, riem_small_pointwise, riem_t, RiemSmall};
use curvlab_core::models::space_form;
use curvlab_core::operator::{bianchi_defect, bianchi_project, kulkarni_nomizu, CurvatureOperator};
use curvlab_core::sampling::{mixed_ensemble, random_operator, seeded_rng};
use curvlab_core::tensor::SymmetricTwoTensor;

fn symmetric_tensor(n: usize, entries: &[f64]) -> SymmetricTwoTensor {
    let mut m = nalgebra::DMatrix::zeros(n, n);
    let mut it = entries.iter().copied().cycle();
    for i in 0..n {
        for j in i..n {
            let v = it.next().unwrap();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymmetricTwoTensor::new(m).unwrap()
}

fn symmetric_operator(n: usize, entries: &[f64]) -> CurvatureOperator {
    let nn = n * (n - 1) / 2;
    let mut m = nalgebra::DMatrix::zeros(nn, nn);
    let mut it = entries.iter().copied().cycle();
    for a in 0..nn {
        for b in a..nn {
            let v = it.next().unwrap();
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    CurvatureOperator::from_matrix(n, m).unwrap()
}

proptest! {
    #[test]
    fn biv_round_trip(n in 2usize..=10, k in 0usize..45) {
        let idx = BivectorIndex::new(n);
        prop_assume!(k < idx.len());
        let (i, j) = idx.pair(k).unwrap();
        prop_assert_eq!(idx.index(i, j).unwrap(), k);
    }

    #[test]
    fn kn_commutes_and_satisfies_bianchi(
        n in 3usize..=5,
        xs in proptest::collection::vec(-3.0f64..3.0, 15),
        ys in proptest::collection::vec(-3.0f64..3.0, 15),
    ) {
        let h = symmetric_tensor(n, &xs);
        let k = symmetric_tensor(n, &ys);
        let hk = kulkarni_nomizu(&h, &k).unwrap();
        let kh = kulkarni_nomizu(&k, &h).unwrap();
        let scale = 1.0 + hk.norm();
        prop_assert!((hk.matrix() - kh.matrix()).norm() <= 1e-12 * scale);
        prop_assert!(bianchi_defect(&hk) <= 1e-12 * scale);
    }

    #[test]
    fn projection_idempotent_and_kills_defect(
        n in 4usize..=5,
        xs in proptest::collection::vec(-3.0f64..3.0, 55),
    ) {
        let s = symmetric_operator(n, &xs);
        let p1 = bianchi_project(&s);
        let p2 = bianchi_project(&p1);
        let scale = 1.0 + s.norm();
        prop_assert!(bianchi_defect(&p1) <= 1e-12 * scale);
        prop_assert!((p1.matrix() - p2.matrix()).norm() <= 1e-12 * scale);
    }

    #[test]
    fn spectrum_sum_matches_trace(
        n in 3usize..=5,
        xs in proptest::collection::vec(-3.0f64..3.0, 55),
    ) {
        let r = bianchi_project(&symmetric_operator(n, &xs));
        let sum: f64 = r.spectrum().eigenvalues().iter().sum();
        let trace = r.matrix().trace();
        prop_assert!((sum - trace).abs() <= 1e-9 * (1.0 + trace.abs()));
    }

    #[test]
    fn riem_pointwise_bounded_by_big_n(
        n in 3usize..=5,
        xs in proptest::collection::vec(-3.0f64..3.0, 55),
        shift in 0.0f64..2.0,
    ) {
        let g = bianchi_project(&symmetric_operator(n, &xs));
        let r = CurvatureOperator::scaled_identity(n, shift).add_scaled(&g, 0.3).unwrap();
        let big_n = (n * (n - 1) / 2) as f64;
        let v = riem_pointwise(&r);
        prop_assert!(v <= big_n + 1e-9);
        if (v - big_n).abs() < 1e-9 && v > 0.0 {
            let spec = r.spectrum();
            prop_assert!(spec.lambda_max() - spec.lambda_min() <= 1e-6 * (1.0 + spec.lambda_max().abs()));
        }
    }

    #[test]
    fn riem_small_rescale_invariant(
        n in 3usize..=5,
        xs in proptest::collection::vec(-3.0f64..3.0, 55),
        c in 0.1f64..10.0,
    ) {
        let r = bianchi_project(&symmetric_operator(n, &xs));
        match (riem_small_pointwise(&r), riem_small_pointwise(&r.scale(c))) {
            (RiemSmall::Value(a), RiemSmall::Value(b)) => {
                prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()));
            }
            (RiemSmall::NegInfinity, RiemSmall::NegInfinity) => {}
            (a, b) => prop_assert!(false, "sentinel mismatch: {a:?} vs {b:?}"),
        }
    }
}

// DSL expressions generated together with their dimension.
fn arb_expr() -> impl Strategy<Value = (String, usize)> {
    let leaf = prop_oneof![
        (1usize..=7).prop_map(|n| (format!("sphere({n})"), n)),
        (1usize..=7).prop_map(|n| (format!("rp({n})"), n)),
        (1usize..=6).prop_map(|n| (format!("spaceform({n})"), n)),
        (1usize..=5).prop_map(|n| (format!("torus({n})"), n)),
        Just(("circle".to_string(), 1)),
        (1usize..=3).prop_map(|n| (format!("cp({n})"), 2 * n)),
        (1usize..=2).prop_map(|n| (format!("hp({n})"), 4 * n)),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|((a, da), (b, db))| {
                (format!("product({a}, {b})"), da + db)
            }),
            (inner.clone(), any::<u8>()).prop_map(|((a, da), raw)| {
                let codim = 1 + (raw as usize) % da;
                (format!("surgery({a}, {codim})"), da)
            }),
            (inner.clone(), 1usize..=3).prop_map(|((a, da), bd)| {
                (format!("bundle({a}, {bd})"), da + bd)
            }),
            inner.prop_map(|(a, da)| {
                if da >= 3 {
                    (format!("connsum({a}, {a})"), da)
                } else {
                    (a, da)
                }
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parser_round_trips_canonical_form((src, dim) in arb_expr()) {
        let ast = parse(&src).unwrap();
        prop_assert_eq!(ast.dim(), dim);
        let printed = ast.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn engine_is_sound_and_deterministic((src, dim) in arb_expr()) {
        let ast = parse(&src).unwrap();
        let a = infer(&ast).unwrap();
        let b = infer(&ast).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(explain(&a), explain(&b));

        let zero = curvlab_core::engine::interval::Rational::from_integer(0);
        let big_n = choose2(dim);
        prop_assert_eq!(a.dim, dim);
        prop_assert!(a.lower.value >= zero);
        prop_assert!(a.lower.value <= a.upper.value);
        prop_assert!(a.upper.value <= big_n);

        // gap window (N-2, N) stays empty
        let edge = big_n - curvlab_core::engine::interval::Rational::from_integer(2);
        if dim >= 3 {
            for v in [a.lower.value, a.upper.value] {
                prop_assert!(!(v > edge && v < big_n), "bound {v} in the gap window");
            }
        }
    }
}

#[test]
fn equivalence_of_positivity_criterion() {
    // Riem_t(R) > 0 iff t < Scal / (2 lambda_max), PSC operators, 50 random
    // t per operator
    let mut rng = seeded_rng(424242, 0);
    use rand::Rng;
    let mut tested = 0;
    for &n in &[3usize, 4, 5] {
        let big_n = (n * (n - 1) / 2) as f64;
        for r in mixed_ensemble(n, 120, 4242 + n as u64) {
            if r.scalar() <= 1e-9 * (1.0 + r.norm()) {
                continue;
            }
            let wall = r.scalar() / (2.0 * r.spectrum().lambda_max());
            for _ in 0..50 {
                let t = f64::EPSILON + rng.gen::<f64>() * big_n;
                if (t - wall).abs() < 1e-7 * (1.0 + wall.abs()) {
                    continue; // too close to the wall for float booleans
                }
                assert_eq!(
                    riem_t(&r, t).is_positive_definite(),
                    t < wall,
                    "criterion mismatch at n = {n}, t = {t}, wall = {wall}"
                );
                tested += 1;
            }
        }
    }
    assert!(tested > 5000, "only {tested} positivity checks ran");
}

#[test]
fn c_p_bridge_from_riem() {
    // riem_pointwise(R) > C(n-p, 2) forces the sampled C_p minimum positive
    let mut rng = seeded_rng(777, 0);
    use rand::Rng;
    let mut accepted = 0;
    while accepted < 4 {
        let n = 4 + (accepted % 2);
        let p = 1 + (rng.gen::<u64>() as usize) % (n - 2);
        let noise = rng.gen::<f64>() * 0.3;
        let g = random_operator(n, &mut rng);
        let r = CurvatureOperator::scaled_identity(n, 1.0)
            .add_scaled(&g, noise)
            .unwrap();
        let threshold = choose2(n - p);
        let thr = *threshold.numer() as f64 / *threshold.denom() as f64;
        if riem_pointwise(&r) <= thr {
            continue;
        }
        accepted += 1;
        let out = curvlab_core::c_p_min(&r, p, 10_000, 31 + accepted as u64).unwrap();
        assert!(
            out.value > 0.0,
            "bridge failed: n = {n}, p = {p}, min = {}",
            out.value
        );
    }
}

#[test]
fn newton_transform_matches_half_riem_1() {
    let mut rng = seeded_rng(11, 3);
    for _ in 0..20 {
        let r = random_operator(5, &mut rng);
        let lhs = r.newton_t1();
        let rhs = riem_t(&r, 1.0).scale(0.5);
        assert!((lhs.matrix() - rhs.matrix()).norm() <= 1e-12 * (1.0 + r.norm()));
    }
}

#[test]
fn space_form_riem_small_is_sentinel_under_perturbation() {
    // small nonnegative perturbations of the identity keep R nonnegative
    let mut rng = seeded_rng(5150, 0);
    for _ in 0..10 {
        let g = random_operator(4, &mut rng);
        let r = space_form(4, 1.0)
            .unwrap()
            .add_scaled(&g, 0.01 / (1.0 + g.norm()))
            .unwrap();
        assert_eq!(riem_small_pointwise(&r), RiemSmall::NegInfinity);
    }
}
