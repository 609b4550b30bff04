//! Construction DSL for compact manifolds and the fixed-point rule engine
//! deriving exact rational bounds on the smooth `Riem` invariant, with a
//! citation trace per derivation step.

pub mod ast;
pub mod facts;
pub mod interval;
pub mod parser;
pub mod rules;

pub use ast::{Atom, Flag, ManifoldExpr};
pub use facts::{base_facts, FactError, Facts};
pub use interval::{Bound, Rational, RiemInterval, TraceStep};
pub use parser::{parse, ParseError};
pub use rules::{explain, infer};
