//! AST of the manifold construction DSL.

use std::fmt;

/// Leaf manifolds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    /// Round sphere S^n.
    Sphere(usize),
    /// Real projective space RP^n.
    RP(usize),
    /// An arbitrary positive spherical space form of dimension n.
    SpaceForm(usize),
    /// Flat torus T^p.
    Torus(usize),
    /// S^1, identical to Torus(1) for the engine.
    Circle,
    /// Complex projective space, complex dimension n (real 2n).
    CP(usize),
    /// Quaternionic projective space, quaternionic dimension n (real 4n).
    HP(usize),
}

impl Atom {
    pub fn dim(&self) -> usize {
        match self {
            Atom::Sphere(n) | Atom::RP(n) | Atom::SpaceForm(n) | Atom::Torus(n) => *n,
            Atom::Circle => 1,
            Atom::CP(n) => 2 * n,
            Atom::HP(n) => 4 * n,
        }
    }

    /// Torus-like atoms (flat, b_1 ≠ 0 throughout).
    pub fn is_toral(&self) -> bool {
        matches!(self, Atom::Torus(_) | Atom::Circle)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sphere(n) => write!(f, "sphere({n})"),
            Atom::RP(n) => write!(f, "rp({n})"),
            Atom::SpaceForm(n) => write!(f, "spaceform({n})"),
            Atom::Torus(n) => write!(f, "torus({n})"),
            Atom::Circle => write!(f, "circle"),
            Atom::CP(n) => write!(f, "cp({n})"),
            Atom::HP(n) => write!(f, "hp({n})"),
        }
    }
}

/// User-asserted topology facts attached with `with {...}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    SimplyConnected,
    TwoConnected,
    ThreeConnected,
    NonString,
    /// b_k is known nonzero.
    BettiNonzero(usize),
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::SimplyConnected => write!(f, "simply_connected"),
            Flag::TwoConnected => write!(f, "two_connected"),
            Flag::ThreeConnected => write!(f, "three_connected"),
            Flag::NonString => write!(f, "non_string"),
            Flag::BettiNonzero(k) => write!(f, "b{k}"),
        }
    }
}

/// A manifold construction term. The `span` fields are byte offsets into
/// the source text.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Atom(Atom),
    Product(Box<ManifoldExpr>, Box<ManifoldExpr>),
    ConnSum(Box<ManifoldExpr>, Box<ManifoldExpr>),
    Surgery(Box<ManifoldExpr>, usize),
    Bundle(Box<ManifoldExpr>, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldExpr {
    pub node: Node,
    pub span: (usize, usize),
    /// Flags apply to the root expression only.
    pub flags: Vec<Flag>,
}

impl ManifoldExpr {
    pub fn new(node: Node, span: (usize, usize)) -> Self {
        ManifoldExpr {
            node,
            span,
            flags: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.node {
            Node::Atom(a) => a.dim(),
            Node::Product(l, r) => l.dim() + r.dim(),
            Node::ConnSum(l, _) => l.dim(),
            Node::Surgery(base, _) => base.dim(),
            Node::Bundle(fiber, base_dim) => fiber.dim() + base_dim,
        }
    }

    /// Factors of a (possibly nested) product, left to right; a non-product
    /// node is its own single factor.
    pub fn product_factors(&self) -> Vec<&ManifoldExpr> {
        match &self.node {
            Node::Product(l, r) => {
                let mut out = l.product_factors();
                out.extend(r.product_factors());
                out
            }
            _ => vec![self],
        }
    }
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Atom(a) => write!(f, "{a}"),
            Node::Product(l, r) => write!(f, "product({l}, {r})"),
            Node::ConnSum(l, r) => write!(f, "connsum({l}, {r})"),
            Node::Surgery(b, c) => write!(f, "surgery({b}, {c})"),
            Node::Bundle(fb, bd) => write!(f, "bundle({fb}, {bd})"),
        }
    }
}
