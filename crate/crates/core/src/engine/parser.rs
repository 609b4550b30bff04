//! Recursive-descent parser for the construction DSL.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! input  := expr [ "with" "{" [flag ("," flag)*] "}" ]
//! expr   := "product" "(" expr "," expr ")"
//!         | "connsum" "(" expr "," expr ")"
//!         | "surgery" "(" expr "," int ")"
//!         | "bundle"  "(" expr "," int ")"
//!         | atom
//! atom   := "sphere" "(" int ")" | "rp" "(" int ")" | "spaceform" "(" int ")"
//!         | "torus" "(" int ")" | "circle" | "cp" "(" int ")" | "hp" "(" int ")"
//! flag   := "simply_connected" | "two_connected" | "three_connected"
//!         | "non_string" | "b" int
//! ```
//!
//! Errors carry the byte offset and the expected-token set; structural
//! checks (connected-sum dimension agreement, surgery codimension range,
//! positive dimensions) are reported with the span of the offending node.

use std::fmt;

use super::ast::{Atom, Flag, ManifoldExpr, Node};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl ParseError {
    fn new(offset: usize, expected: Vec<&'static str>, found: impl Into<String>) -> Self {
        ParseError {
            offset,
            expected,
            found: found.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" | "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn found_here(&self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        }
    }

    fn expect_char(&mut self, c: char, label: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(ParseError::new(self.pos, vec![label], self.found_here()))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let word: String = self.src[self.pos..]
            .chars()
            .take_while(|c| c.is_ascii_alphabetic() || *c == '_')
            .collect();
        if word.is_empty() {
            return Err(ParseError::new(
                self.pos,
                vec!["identifier"],
                self.found_here(),
            ));
        }
        self.pos += word.len();
        Ok((word, start))
    }

    fn integer(&mut self) -> Result<(usize, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits: String = self.src[self.pos..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        if digits.is_empty() {
            return Err(ParseError::new(self.pos, vec!["integer"], self.found_here()));
        }
        self.pos += digits.len();
        let value = digits
            .parse::<usize>()
            .map_err(|_| ParseError::new(start, vec!["integer"], format!("`{digits}`")))?;
        Ok((value, start))
    }

    fn int_arg(&mut self) -> Result<(usize, usize), ParseError> {
        self.expect_char('(', "`(`")?;
        let v = self.integer()?;
        self.expect_char(')', "`)`")?;
        Ok(v)
    }

    fn positive_int_arg(&mut self, what: &'static str) -> Result<usize, ParseError> {
        let (v, at) = self.int_arg()?;
        if v == 0 {
            return Err(ParseError::new(at, vec![what], "`0`".to_string()));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<ManifoldExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let (word, word_at) = self.ident()?;
        let node = match word.as_str() {
            "product" | "connsum" => {
                self.expect_char('(', "`(`")?;
                let left = self.expr()?;
                self.expect_char(',', "`,`")?;
                let right = self.expr()?;
                self.expect_char(')', "`)`")?;
                if word == "product" {
                    Node::Product(Box::new(left), Box::new(right))
                } else {
                    if left.dim() != right.dim() {
                        return Err(ParseError::new(
                            word_at,
                            vec!["connsum operands of equal dimension"],
                            format!("dimensions {} and {}", left.dim(), right.dim()),
                        ));
                    }
                    if left.dim() < 3 {
                        return Err(ParseError::new(
                            word_at,
                            vec!["connsum operands of dimension >= 3"],
                            format!("dimension {}", left.dim()),
                        ));
                    }
                    Node::ConnSum(Box::new(left), Box::new(right))
                }
            }
            "surgery" => {
                self.expect_char('(', "`(`")?;
                let base = self.expr()?;
                self.expect_char(',', "`,`")?;
                let (codim, codim_at) = self.integer()?;
                self.expect_char(')', "`)`")?;
                if codim == 0 || codim > base.dim() {
                    return Err(ParseError::new(
                        codim_at,
                        vec!["codimension in 1..=dim"],
                        format!("`{codim}` (dim = {})", base.dim()),
                    ));
                }
                Node::Surgery(Box::new(base), codim)
            }
            "bundle" => {
                self.expect_char('(', "`(`")?;
                let fiber = self.expr()?;
                self.expect_char(',', "`,`")?;
                let (base_dim, bd_at) = self.integer()?;
                self.expect_char(')', "`)`")?;
                if base_dim == 0 {
                    return Err(ParseError::new(
                        bd_at,
                        vec!["positive base dimension"],
                        "`0`".to_string(),
                    ));
                }
                Node::Bundle(Box::new(fiber), base_dim)
            }
            "sphere" => Node::Atom(Atom::Sphere(self.positive_int_arg("positive dimension")?)),
            "rp" => Node::Atom(Atom::RP(self.positive_int_arg("positive dimension")?)),
            "spaceform" => {
                Node::Atom(Atom::SpaceForm(self.positive_int_arg("positive dimension")?))
            }
            "torus" => Node::Atom(Atom::Torus(self.positive_int_arg("positive dimension")?)),
            "circle" => Node::Atom(Atom::Circle),
            "cp" => Node::Atom(Atom::CP(self.positive_int_arg("positive dimension")?)),
            "hp" => Node::Atom(Atom::HP(self.positive_int_arg("positive dimension")?)),
            other => {
                return Err(ParseError::new(
                    word_at,
                    vec![
                        "product", "connsum", "surgery", "bundle", "sphere", "rp", "spaceform",
                        "torus", "circle", "cp", "hp",
                    ],
                    format!("`{other}`"),
                ))
            }
        };
        Ok(ManifoldExpr::new(node, (start, self.pos)))
    }

    fn flag(&mut self) -> Result<Flag, ParseError> {
        let (word, at) = self.ident()?;
        match word.as_str() {
            "simply_connected" => Ok(Flag::SimplyConnected),
            "two_connected" => Ok(Flag::TwoConnected),
            "three_connected" => Ok(Flag::ThreeConnected),
            "non_string" => Ok(Flag::NonString),
            "b" => {
                let (k, k_at) = self.integer()?;
                if k == 0 {
                    return Err(ParseError::new(
                        k_at,
                        vec!["betti index >= 1"],
                        "`0`".to_string(),
                    ));
                }
                Ok(Flag::BettiNonzero(k))
            }
            other => Err(ParseError::new(
                at,
                vec![
                    "simply_connected",
                    "two_connected",
                    "three_connected",
                    "non_string",
                    "b<k>",
                ],
                format!("`{other}`"),
            )),
        }
    }

    fn flags_suffix(&mut self) -> Result<Vec<Flag>, ParseError> {
        self.expect_char('{', "`{`")?;
        let mut flags = Vec::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            self.pos += 1;
            return Ok(flags);
        }
        loop {
            flags.push(self.flag()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                }
                Some('}') => {
                    self.pos += 1;
                    break;
                }
                _ => {
                    return Err(ParseError::new(
                        self.pos,
                        vec!["`,`", "`}`"],
                        self.found_here(),
                    ))
                }
            }
        }
        Ok(flags)
    }
}

/// Parses a DSL expression with optional `with {...}` suffix.
pub fn parse(text: &str) -> Result<ManifoldExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let mut expr = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        let save = p.pos;
        match p.ident() {
            Ok((word, _)) if word == "with" => {
                let mut flags = p.flags_suffix()?;
                flags.sort();
                flags.dedup();
                expr.flags = flags;
            }
            _ => {
                return Err(ParseError::new(
                    save,
                    vec!["`with`", "end of input"],
                    p.found_here(),
                ));
            }
        }
    }
    p.skip_ws();
    if p.pos < text.len() {
        return Err(ParseError::new(
            p.pos,
            vec!["end of input"],
            p.found_here(),
        ));
    }
    Ok(expr)
}
