//! Fixed-point rule engine deriving bounds on the smooth `Riem` invariant.
//!
//! Each rule moves a bound to one of finitely many rational constants and
//! never widens the interval, so the per-node loop terminates; 50
//! iterations is a hard ceiling it never reaches in practice. Rules fire in
//! a fixed order, making the trace a pure function of the input.

use super::ast::{Atom, ManifoldExpr, Node};
use super::facts::{base_facts, Connectivity, FactError, Facts, Pi1};
use super::interval::{choose2, Bound, Rational, RiemInterval};

const CITE_SPACE_FORM: &str = "Example 1.2(1)";
const CITE_CP: &str = "Example 1.1(4)";
const CITE_HP: &str = "Example 1.1(5)";
const CITE_TORUS: &str = "Riem = 0 convention (tori carry no PSC metrics)";
const CITE_PRODUCT: &str = "Proposition 1.2";
const CITE_TORUS_CAP: &str = "Theorem E";
const CITE_CIRCLE_CAP: &str = "Corollary C a)";
const CITE_SURGERY_A: &str = "Theorem B a)";
const CITE_SURGERY_B: &str = "Theorem B b)";
const CITE_CONNSUM: &str = "Corollary 4.2 a)";
const CITE_GAP: &str = "Theorem D";
const CITE_B1: &str = "Theorem C";
const CITE_HOMOLOGY_SPHERE: &str = "Theorem C'";
const CITE_INTERMEDIATE: &str = "Theorem 5.1";
const CITE_GAP_BPRIME: &str = "Theorem B'";
const CITE_THEOREM_G: &str = "Theorem G";
const CITE_BUNDLE: &str = "Theorem A";
const CITE_PI1: &str = "Proposition 2.1(2) + Myers";

/// Derives `Riem(M)` bounds for the expression, bottom-up. The returned
/// trace lists the rule firings at the root node; sub-derivations only
/// contribute their final bounds.
pub fn infer(expr: &ManifoldExpr) -> Result<RiemInterval, FactError> {
    let facts = base_facts(expr)?;
    infer_node(expr, &facts)
}

fn infer_node(expr: &ManifoldExpr, facts: &Facts) -> Result<RiemInterval, FactError> {
    let children: Vec<RiemInterval> = match &expr.node {
        Node::Atom(_) => Vec::new(),
        Node::Product(l, r) | Node::ConnSum(l, r) => {
            vec![infer_sub(l)?, infer_sub(r)?]
        }
        Node::Surgery(base, _) => vec![infer_sub(base)?],
        Node::Bundle(fiber, _) => vec![infer_sub(fiber)?],
    };

    let mut iv = RiemInterval::full(facts.dim);
    for _ in 0..50 {
        if !apply_rules(expr, facts, &children, &mut iv) {
            break;
        }
    }

    // Surgery nodes whose descent hypothesis stays uncertified say so.
    if let Node::Surgery(_, codim) = &expr.node {
        if *codim >= 3 && !children[0].upper_at_most(choose2(codim - 1)) {
            iv.trace.push(super::interval::TraceStep {
                rule: "R5",
                cite: CITE_SURGERY_A,
                bounds: format!(
                    "not applied: base upper bound {} does not certify Riem <= {}",
                    children[0].upper,
                    super::interval::format_rational(choose2(codim - 1))
                ),
            });
        }
    }

    debug_assert!(iv.lower.value >= Rational::from_integer(0));
    debug_assert!(iv.lower.value <= iv.upper.value);
    debug_assert!(iv.upper.value <= choose2(facts.dim));
    Ok(iv)
}

fn infer_sub(expr: &ManifoldExpr) -> Result<RiemInterval, FactError> {
    let facts = base_facts(expr)?;
    infer_node(expr, &facts)
}

/// One sweep over the rule ledger; true when any bound moved.
fn apply_rules(
    expr: &ManifoldExpr,
    facts: &Facts,
    children: &[RiemInterval],
    iv: &mut RiemInterval,
) -> bool {
    let n = facts.dim;
    let big_n = choose2(n);
    let mut changed = false;

    // R1: exact atoms.
    if let Node::Atom(atom) = &expr.node {
        match atom {
            Atom::Sphere(k) | Atom::RP(k) | Atom::SpaceForm(k) => {
                let v = choose2(*k);
                changed |= iv.raise_lower(Bound::closed(v), "R1", CITE_SPACE_FORM);
                changed |= iv.cut_upper(Bound::closed(v), "R1", CITE_SPACE_FORM);
            }
            Atom::CP(k) => {
                let v = Rational::from_integer(*k as i64);
                changed |= iv.raise_lower(Bound::closed(v), "R1", CITE_CP);
            }
            Atom::HP(k) => {
                let v = Rational::from_integer((2 * k + 4) as i64);
                changed |= iv.raise_lower(Bound::closed(v), "R1", CITE_HP);
            }
            Atom::Torus(_) | Atom::Circle => {
                changed |= iv.cut_upper(
                    Bound::closed(Rational::from_integer(0)),
                    "R1",
                    CITE_TORUS,
                );
            }
        }
    }

    // R2: product ideal property — lower bound inherits from each factor.
    if matches!(expr.node, Node::Product(..)) {
        for child in children {
            changed |= iv.raise_lower(child.lower, "R2", CITE_PRODUCT);
        }
    }

    // R4 before R3: both cap products with flat toral factors, and the
    // all-dimensions circle cap takes precedence in the trace when the two
    // conclusions coincide.
    if matches!(expr.node, Node::Product(..)) {
        let toral: usize = expr
            .product_factors()
            .iter()
            .filter_map(|f| match &f.node {
                Node::Atom(a) if a.is_toral() => Some(a.dim()),
                _ => None,
            })
            .sum();

        // R4: circle cap, any dimension n >= 3.
        if toral >= 1 && n >= 3 {
            changed |= iv.cut_upper(Bound::closed(choose2(n - 1)), "R4", CITE_CIRCLE_CAP);
        }

        // R3: torus cap, n <= 7 only (open beyond that).
        if toral >= 1 && n <= 7 {
            changed |= iv.cut_upper(Bound::closed(choose2(n - toral)), "R3", CITE_TORUS_CAP);
        }
    }

    // R5/R6: surgery descent.
    if let Node::Surgery(_, codim) = &expr.node {
        let base = &children[0];
        if *codim >= 3 {
            // R5: the base's derived upper bound certifies the hypothesis
            // Riem(base) <= C(codim-1, 2); the full lower bound descends.
            if base.upper_at_most(choose2(codim - 1)) {
                changed |= iv.raise_lower(base.lower, "R5", CITE_SURGERY_A);
            }
            // R6: Riem(base) > C(k,2) with codim >= k+1 descends to C(k,2);
            // take the largest admissible k.
            let k_max = (codim - 1).min(n - 1);
            for k in (2..=k_max).rev() {
                if base.lower_exceeds(choose2(k)) {
                    changed |= iv.raise_lower(Bound::closed(choose2(k)), "R6", CITE_SURGERY_B);
                    break;
                }
            }
        }
    }

    // R7: connected sums of PSC-certified pieces, capped at C(n-1, 2).
    if matches!(expr.node, Node::ConnSum(..)) {
        let (l, r) = (&children[0], &children[1]);
        if l.is_psc_certified() && r.is_psc_certified() {
            let bound = l
                .lower
                .weaker_lower(r.lower)
                .weaker_lower(Bound::closed(choose2(n - 1)));
            changed |= iv.raise_lower(bound, "R7", CITE_CONNSUM);
        }
    }

    // R13: exact connected-sum values.
    if let Node::ConnSum(l, r) = &expr.node {
        if n <= 7 {
            for (side, other) in [(l, &children[1]), (r, &children[0])] {
                if matches_sphere_times_torus(side, 2)
                    && other.lower.value >= Rational::from_integer(1)
                {
                    let one = Rational::from_integer(1);
                    changed |= iv.raise_lower(Bound::closed(one), "R13", CITE_THEOREM_G);
                    changed |= iv.cut_upper(Bound::closed(one), "R13", CITE_THEOREM_G);
                }
                if n >= 2
                    && matches_sphere_times_torus(side, n - 1)
                    && other.lower.value >= choose2(n - 1)
                {
                    let v = choose2(n - 1);
                    changed |= iv.raise_lower(Bound::closed(v), "R13", CITE_THEOREM_G);
                    changed |= iv.cut_upper(Bound::closed(v), "R13", CITE_THEOREM_G);
                }
            }
        }
    }

    // R14: fiber-bundle lower bound, strict below the fiber value.
    if let Node::Bundle(_, _) = &expr.node {
        let fiber = &children[0];
        if fiber.is_psc_certified() {
            changed |= iv.raise_lower(Bound::open(fiber.lower.value), "R14", CITE_BUNDLE);
        }
    }

    // R9: nonzero first Betti number caps at C(n-1, 2).
    if facts.b1_nonzero() && n >= 3 {
        changed |= iv.cut_upper(Bound::closed(choose2(n - 1)), "R9", CITE_B1);
    }

    // R15: infinite fundamental group rules out positive Ricci, so the
    // Ricci threshold C(n-1, 2) caps the invariant.
    if facts.pi1 == Pi1::Infinite && n >= 3 {
        changed |= iv.cut_upper(Bound::closed(choose2(n - 1)), "R15", CITE_PI1);
    }

    // R10: any nonvanishing middle Betti number blocks the homology-sphere
    // window (N - (n-2), N].
    if n >= 4 && !facts.betti_nonzero.is_empty() {
        let cap = big_n - Rational::from_integer((n - 2) as i64);
        changed |= iv.cut_upper(Bound::closed(cap), "R10", CITE_HOMOLOGY_SPHERE);
    }

    // R11: b_k != 0 with p <= k <= n-p caps at N - p(n-p)/2; the best p is
    // min(k, n-k).
    for &k in &facts.betti_nonzero {
        let p = k.min(n - k);
        if p >= 2 && n >= 4 {
            let cap = big_n - Rational::new((p * (n - p)) as i64, 2);
            changed |= iv.cut_upper(Bound::closed(cap), "R11", CITE_INTERMEDIATE);
        }
    }

    // R12: connectivity gaps for PSC-certified manifolds.
    if iv.is_psc_certified() {
        let mut gap: Option<i64> = None;
        if facts.connectivity >= Connectivity::Simply && n >= 5 {
            gap = Some(1);
        }
        if facts.connectivity >= Connectivity::Two && n >= 7 {
            gap = Some(3);
        }
        if facts.connectivity >= Connectivity::Three && facts.non_string && n >= 9 {
            gap = Some(6);
        }
        if let Some(v) = gap {
            changed |= iv.raise_lower(
                Bound::closed(Rational::from_integer(v)),
                "R12",
                CITE_GAP_BPRIME,
            );
        }
    }

    // R8: gap snap — nothing lives in (N-2, N).
    if n >= 3 {
        let edge = big_n - Rational::from_integer(2);
        if iv.lower.value > edge {
            changed |= iv.raise_lower(Bound::closed(big_n), "R8", CITE_GAP);
        }
        let upper_below_max = iv.upper.value < big_n || (iv.upper.value == big_n && iv.upper.open);
        if upper_below_max && iv.upper.value > edge {
            changed |= iv.cut_upper(Bound::closed(edge), "R8", CITE_GAP);
        }
    }

    changed
}

/// Does the expression flatten to exactly one round sphere of dimension
/// `sphere_dim` times toral atoms (of any total dimension >= 1)?
fn matches_sphere_times_torus(expr: &ManifoldExpr, sphere_dim: usize) -> bool {
    let factors = expr.product_factors();
    let mut spheres = 0usize;
    let mut toral = 0usize;
    for f in &factors {
        match &f.node {
            Node::Atom(Atom::Sphere(k)) if *k == sphere_dim => spheres += 1,
            Node::Atom(a) if a.is_toral() => toral += a.dim(),
            _ => return false,
        }
    }
    spheres == 1 && toral >= 1 && sphere_dim + toral == expr.dim()
}

/// Human-readable derivation: one line per rule firing, then the result.
pub fn explain(interval: &RiemInterval) -> String {
    let mut out = String::new();
    for step in &interval.trace {
        out.push_str(&format!("{} ({}): {}\n", step.rule, step.cite, step.bounds));
    }
    let exactness = if interval.is_exact() {
        "exact"
    } else {
        "bounds only"
    };
    out.push_str(&format!(
        "result: {} ({}), dim = {}\n",
        interval.bounds_string(),
        exactness,
        interval.dim
    ));
    if let Some(b) = interval.exact_value_is_binomial() {
        out.push_str(&format!(
            "value is a binomial C(k,2): {b} (whether Riem only takes such values is open)\n"
        ));
    }
    out
}
