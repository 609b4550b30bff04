//! Shallow topology bookkeeping for DSL terms.
//!
//! Betti knowledge is tracked as "known nonzero" only, derived from sphere,
//! circle and torus atoms through products (Künneth over a field has no
//! cancellation) and connected sums in middle degrees. Fundamental-group
//! knowledge is a three-state class. Surgery and bundle nodes wipe derived
//! topology (only the dimension survives). Anything deeper must be asserted
//! through flags; a user flag contradicting a derived fact is an error.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::{Atom, Flag, ManifoldExpr, Node};

/// What is known about the fundamental group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pi1 {
    Trivial,
    /// Nontrivial but possibly finite (e.g. RP^n).
    Nontrivial,
    Infinite,
    Unknown,
}

/// Connectivity class, ordered by strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Connectivity {
    Unknown,
    Simply,
    Two,
    Three,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facts {
    pub dim: usize,
    /// Degrees 1..=dim-1 with b_k known nonzero.
    pub betti_nonzero: BTreeSet<usize>,
    pub pi1: Pi1,
    pub connectivity: Connectivity,
    pub non_string: bool,
}

impl Facts {
    pub fn b1_nonzero(&self) -> bool {
        self.betti_nonzero.contains(&1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactError {
    /// A user flag contradicts a derived fact; both sources are named.
    Conflict { flag: Flag, derived: String },
    BettiOutOfRange { k: usize, dim: usize },
}

impl fmt::Display for FactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactError::Conflict { flag, derived } => {
                write!(f, "fact conflict: user flag `{flag}` contradicts derived fact ({derived})")
            }
            FactError::BettiOutOfRange { k, dim } => {
                write!(f, "betti flag b{k} out of range 1..={} for dimension {dim}", dim - 1)
            }
        }
    }
}

impl std::error::Error for FactError {}

/// Full Betti support (degrees where b_k is known nonzero, 0..=dim) of an
/// atom, over the rationals.
fn atom_betti(atom: &Atom) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    out.insert(0);
    match atom {
        Atom::Sphere(n) | Atom::SpaceForm(n) => {
            // space forms are rational homology spheres in odd dimensions;
            // only the certain degrees are recorded
            if matches!(atom, Atom::Sphere(_)) || n % 2 == 1 {
                out.insert(*n);
            }
        }
        Atom::RP(n) => {
            if n % 2 == 1 {
                out.insert(*n);
            }
        }
        Atom::Torus(p) => {
            for k in 0..=*p {
                out.insert(k);
            }
        }
        Atom::Circle => {
            out.insert(1);
        }
        Atom::CP(_) | Atom::HP(_) => {
            // known, but deliberately not derived: engine rules stay
            // conservative for projective atoms, flags can assert more
        }
    }
    out
}

fn atom_pi1(atom: &Atom) -> Pi1 {
    match atom {
        Atom::Sphere(n) => {
            if *n >= 2 {
                Pi1::Trivial
            } else {
                Pi1::Infinite
            }
        }
        Atom::CP(_) | Atom::HP(_) => Pi1::Trivial,
        Atom::RP(n) => {
            if *n >= 2 {
                Pi1::Nontrivial
            } else {
                Pi1::Infinite
            }
        }
        Atom::SpaceForm(_) => Pi1::Unknown, // the trivial quotient is a sphere
        Atom::Torus(_) | Atom::Circle => Pi1::Infinite,
    }
}

/// Betti support of a term, including degrees 0 and dim.
fn betti_support(expr: &ManifoldExpr) -> BTreeSet<usize> {
    match &expr.node {
        Node::Atom(a) => atom_betti(a),
        Node::Product(l, r) => {
            let bl = betti_support(l);
            let br = betti_support(r);
            let mut out = BTreeSet::new();
            for i in &bl {
                for j in &br {
                    out.insert(i + j);
                }
            }
            out
        }
        Node::ConnSum(l, r) => {
            let n = expr.dim();
            let mut out = BTreeSet::new();
            out.insert(0);
            for k in betti_support(l).union(&betti_support(r)) {
                if *k >= 1 && *k < n {
                    out.insert(*k);
                }
            }
            // orientable pieces would contribute b_n; stay conservative
            out
        }
        Node::Surgery(..) | Node::Bundle(..) => {
            let mut out = BTreeSet::new();
            out.insert(0);
            out
        }
    }
}

fn derived_pi1(expr: &ManifoldExpr) -> Pi1 {
    match &expr.node {
        Node::Atom(a) => atom_pi1(a),
        Node::Product(l, r) => match (derived_pi1(l), derived_pi1(r)) {
            (Pi1::Infinite, _) | (_, Pi1::Infinite) => Pi1::Infinite,
            (Pi1::Trivial, Pi1::Trivial) => Pi1::Trivial,
            (Pi1::Nontrivial, Pi1::Trivial) | (Pi1::Trivial, Pi1::Nontrivial) => Pi1::Nontrivial,
            (Pi1::Nontrivial, Pi1::Nontrivial) => Pi1::Nontrivial,
            _ => Pi1::Unknown,
        },
        Node::ConnSum(l, r) => {
            // free product (dim >= 3): infinite as soon as both sides are
            // nontrivial, or one side is already infinite
            match (derived_pi1(l), derived_pi1(r)) {
                (Pi1::Infinite, _) | (_, Pi1::Infinite) => Pi1::Infinite,
                (Pi1::Nontrivial, Pi1::Nontrivial) => Pi1::Infinite,
                (Pi1::Trivial, Pi1::Trivial) => Pi1::Trivial,
                (Pi1::Nontrivial, Pi1::Trivial) | (Pi1::Trivial, Pi1::Nontrivial) => {
                    Pi1::Nontrivial
                }
                _ => Pi1::Unknown,
            }
        }
        Node::Surgery(..) | Node::Bundle(..) => Pi1::Unknown,
    }
}

/// Derives facts from the AST shape and merges user flags, rejecting
/// contradictions.
pub fn base_facts(expr: &ManifoldExpr) -> Result<Facts, FactError> {
    let dim = expr.dim();
    let support = betti_support(expr);
    let mut betti_nonzero: BTreeSet<usize> =
        support.into_iter().filter(|&k| k >= 1 && k < dim).collect();
    let mut pi1 = derived_pi1(expr);
    let mut connectivity = match pi1 {
        Pi1::Trivial => Connectivity::Simply,
        _ => Connectivity::Unknown,
    };
    let mut non_string = false;

    for flag in &expr.flags {
        match flag {
            Flag::BettiNonzero(k) => {
                if *k == 0 || *k >= dim {
                    return Err(FactError::BettiOutOfRange { k: *k, dim });
                }
                betti_nonzero.insert(*k);
            }
            Flag::SimplyConnected => connectivity = connectivity.max(Connectivity::Simply),
            Flag::TwoConnected => connectivity = connectivity.max(Connectivity::Two),
            Flag::ThreeConnected => connectivity = connectivity.max(Connectivity::Three),
            Flag::NonString => non_string = true,
        }
    }

    // connectivity flags against derived pi1 / betti facts
    if connectivity >= Connectivity::Simply {
        if matches!(pi1, Pi1::Nontrivial | Pi1::Infinite) {
            let flag = connectivity_flag(connectivity);
            return Err(FactError::Conflict {
                flag,
                derived: "fundamental group is nontrivial".to_string(),
            });
        }
        pi1 = Pi1::Trivial;
    }
    let killed = match connectivity {
        Connectivity::Unknown => 0,
        Connectivity::Simply => 1,
        Connectivity::Two => 2,
        Connectivity::Three => 3,
    };
    for k in 1..=killed.min(dim.saturating_sub(1)) {
        if betti_nonzero.contains(&k) {
            return Err(FactError::Conflict {
                flag: connectivity_flag(connectivity),
                derived: format!("b{k} is nonzero"),
            });
        }
    }

    Ok(Facts {
        dim,
        betti_nonzero,
        pi1,
        connectivity,
        non_string,
    })
}

fn connectivity_flag(c: Connectivity) -> Flag {
    match c {
        Connectivity::Three => Flag::ThreeConnected,
        Connectivity::Two => Flag::TwoConnected,
        _ => Flag::SimplyConnected,
    }
}
