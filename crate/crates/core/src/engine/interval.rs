//! Exact rational bounds on the smooth `Riem` invariant.
//!
//! A lower bound `{value, open}` certifies `Riem(M) ≥ value`; `open` marks
//! bounds obtained only through strict approximation from below (no
//! attainment information), as with fiber-bundle conclusions. An upper
//! bound certifies `Riem(M) ≤ value`, `open` meaning strictly less. Rule
//! hypotheses of the form `Riem > c` are certified conservatively: only a
//! lower bound whose value exceeds c qualifies.

use num_rational::Rational64;
use serde_json::json;
use std::fmt;

pub type Rational = Rational64;

/// Binomial coefficient C(k, 2) as an exact rational.
pub fn choose2(k: usize) -> Rational {
    if k < 2 {
        return Rational::from_integer(0);
    }
    Rational::new((k * (k - 1)) as i64, 2)
}

/// One endpoint of a [`RiemInterval`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub value: Rational,
    pub open: bool,
}

impl Bound {
    pub fn closed(value: Rational) -> Self {
        Bound { value, open: false }
    }

    pub fn open(value: Rational) -> Self {
        Bound { value, open: true }
    }

    /// Strength ordering for lower bounds: larger value wins; at equal
    /// value a closed bound (`≥ v`) is weaker than an open one only in the
    /// attainment sense, so `open` is treated as the stronger flag when a
    /// rule needs to pick one. Returns true when `self` improves on
    /// `other` as a lower bound.
    fn stronger_lower(&self, other: &Bound) -> bool {
        self.value > other.value || (self.value == other.value && self.open && !other.open)
    }

    /// True when `self` improves on `other` as an upper bound.
    fn stronger_upper(&self, other: &Bound) -> bool {
        self.value < other.value || (self.value == other.value && self.open && !other.open)
    }

    /// The weaker of two lower bounds — what a rule may conclude when it
    /// only knows both hold.
    pub fn weaker_lower(self, other: Bound) -> Bound {
        if self.stronger_lower(&other) {
            other
        } else {
            self
        }
    }

    pub fn value_string(&self) -> String {
        format_rational(self.value)
    }
}

pub fn format_rational(r: Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.open {
            write!(f, "{}*", format_rational(self.value))
        } else {
            write!(f, "{}", format_rational(self.value))
        }
    }
}

/// A single rule firing: rule id, citation, bounds before and after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: &'static str,
    pub cite: &'static str,
    pub bounds: String,
}

/// Derived bounds `lower ≤ Riem(M) ≤ upper` together with the derivation
/// trace. Open lower bounds are rendered with a trailing `*`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemInterval {
    pub dim: usize,
    pub lower: Bound,
    pub upper: Bound,
    pub trace: Vec<TraceStep>,
}

impl RiemInterval {
    /// Full starting interval [0, n(n-1)/2].
    pub fn full(dim: usize) -> Self {
        RiemInterval {
            dim,
            lower: Bound::closed(Rational::from_integer(0)),
            upper: Bound::closed(choose2(dim)),
            trace: Vec::new(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lower.value == self.upper.value && !self.lower.open && !self.upper.open
    }

    /// The certified statement `Riem(M) > 0`.
    pub fn is_psc_certified(&self) -> bool {
        self.lower.value > Rational::from_integer(0)
    }

    /// Certifies the strict hypothesis `Riem(M) > c`.
    pub fn lower_exceeds(&self, c: Rational) -> bool {
        self.lower.value > c
    }

    /// Certifies the hypothesis `Riem(M) ≤ c`.
    pub fn upper_at_most(&self, c: Rational) -> bool {
        self.upper.value <= c
    }

    pub fn bounds_string(&self) -> String {
        format!("[{}, {}]", self.lower, self.upper)
    }

    /// Raises the lower bound if `candidate` is stronger, recording the
    /// step; returns whether anything changed.
    pub fn raise_lower(
        &mut self,
        candidate: Bound,
        rule: &'static str,
        cite: &'static str,
    ) -> bool {
        // never raise past the hard ceiling
        let ceiling = choose2(self.dim);
        let mut candidate = candidate;
        if candidate.value > ceiling {
            candidate = Bound {
                value: ceiling,
                open: candidate.open,
            };
        }
        if candidate.stronger_lower(&self.lower) {
            let before = self.bounds_string();
            self.lower = candidate;
            let after = self.bounds_string();
            self.trace.push(TraceStep {
                rule,
                cite,
                bounds: format!("{before} -> {after}"),
            });
            debug_assert!(self.lower.value <= self.upper.value);
            true
        } else {
            false
        }
    }

    /// Lowers the upper bound if `candidate` is stronger, recording the
    /// step; returns whether anything changed.
    pub fn cut_upper(
        &mut self,
        candidate: Bound,
        rule: &'static str,
        cite: &'static str,
    ) -> bool {
        let mut candidate = candidate;
        if candidate.value < Rational::from_integer(0) {
            candidate = Bound {
                value: Rational::from_integer(0),
                open: false,
            };
        }
        if candidate.stronger_upper(&self.upper) {
            let before = self.bounds_string();
            self.upper = candidate;
            let after = self.bounds_string();
            self.trace.push(TraceStep {
                rule,
                cite,
                bounds: format!("{before} -> {after}"),
            });
            debug_assert!(self.lower.value <= self.upper.value);
            true
        } else {
            false
        }
    }

    /// Whether the exact value, if any, is a binomial number C(k, 2). The
    /// question whether `Riem` only takes such values is open; the flag is
    /// reported, never assumed.
    pub fn exact_value_is_binomial(&self) -> Option<bool> {
        if !self.is_exact() {
            return None;
        }
        let v = self.lower.value;
        let mut k = 0usize;
        loop {
            let c = choose2(k);
            if c == v {
                return Some(true);
            }
            if c > v {
                return Some(false);
            }
            k += 1;
        }
    }

    /// JSON per the published schema.
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = json!({
            "dim": self.dim,
            "lower": { "value": self.lower.value_string(), "open": self.lower.open },
            "upper": { "value": self.upper.value_string(), "open": self.upper.open },
            "exact": self.is_exact(),
            "trace": self.trace.iter().map(|s| json!({
                "rule": s.rule,
                "cite": s.cite,
                "bounds": s.bounds,
            })).collect::<Vec<_>>(),
        });
        if let Some(b) = self.exact_value_is_binomial() {
            out["value_is_binomial"] = json!(b);
        }
        out
    }
}
