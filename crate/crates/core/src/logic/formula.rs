//! Formula syntax tree and its text form.
//!
//! Text grammar (loosest binding first):
//!
//! ```text
//! or    := and ('|' and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | '<' REL '>' unary | '[' REL ']' unary | '(' or ')' | 'true' | atom
//! atom  := FN '(' ATTR ')' ('>=' | '<=') NUMBER
//! ```
//!
//! `REL` is one of `Id L Linv AO AOinv DBE DBEinv G`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::relation::RelationId;
use crate::error::{Error, Result};
use crate::logiset::{Atom, FeatureFn, Op};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Formula {
    True,
    Atom(Atom),
    Not(Box<Formula>),
    /// Conjunction; empty means true.
    And(Vec<Formula>),
    /// Disjunction; empty means false.
    Or(Vec<Formula>),
    Diamond(RelationId, Box<Formula>),
    Boxed(RelationId, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn diamond(r: RelationId, f: Formula) -> Self {
        Formula::Diamond(r, Box::new(f))
    }

    pub fn boxed(r: RelationId, f: Formula) -> Self {
        Formula::Boxed(r, Box::new(f))
    }

    /// Conjunction that flattens nested conjunctions and drops `true`.
    pub fn and(parts: Vec<Formula>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Formula::True => {}
                Formula::And(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Formula::True,
            1 => flat.pop().unwrap(),
            _ => Formula::And(flat),
        }
    }

    /// Disjunction that flattens nested disjunctions.
    pub fn or(parts: Vec<Formula>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Formula::Or(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Formula::Or(flat)
        }
    }

    /// Modal depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::Atom(_) => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Diamond(_, f) | Formula::Boxed(_, f) => 1 + f.depth(),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::True => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(f) | Formula::Diamond(_, f) | Formula::Boxed(_, f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
        }
    }

    /// Text form using `names` for attribute indices.
    pub fn display<'a>(&'a self, names: &'a [String]) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            names,
        }
    }

    /// Parses the text form, resolving attribute names against `names`.
    pub fn parse(text: &str, names: &[String]) -> Result<Formula> {
        let mut p = Parser {
            src: text,
            pos: 0,
            names,
        };
        let f = p.or()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(f)
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    names: &'a [String],
}

impl FormulaDisplay<'_> {
    fn sub<'b>(&'b self, f: &'b Formula) -> FormulaDisplay<'b> {
        FormulaDisplay {
            formula: f,
            names: self.names,
        }
    }
}

fn write_atom(f: &mut fmt::Formatter<'_>, a: &Atom, names: &[String]) -> fmt::Result {
    match names.get(a.attr) {
        Some(n) => write!(f, "{}({}) {} {}", a.func, n, a.op, a.threshold),
        None => write!(f, "{}(#{}) {} {}", a.func, a.attr, a.op, a.threshold),
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.formula {
            Formula::True => f.write_str("true"),
            Formula::Atom(a) => write_atom(f, a, self.names),
            Formula::Not(inner) => write!(f, "!({})", self.sub(inner)),
            Formula::Diamond(r, inner) => write!(f, "<{r}>({})", self.sub(inner)),
            Formula::Boxed(r, inner) => write!(f, "[{r}]({})", self.sub(inner)),
            Formula::And(parts) if parts.is_empty() => f.write_str("true"),
            Formula::Or(parts) if parts.is_empty() => f.write_str("!(true)"),
            Formula::And(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    match p {
                        Formula::Or(_) | Formula::And(_) => write!(f, "({})", self.sub(p))?,
                        _ => write!(f, "{}", self.sub(p))?,
                    }
                }
                Ok(())
            }
            Formula::Or(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    match p {
                        Formula::Or(_) | Formula::And(_) => write!(f, "({})", self.sub(p))?,
                        _ => write!(f, "{}", self.sub(p))?,
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '.' || c == '-' || c == '#'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected identifier"));
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while self.eat("|") {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn relation(&mut self, close: &str) -> Result<RelationId> {
        let name = self.ident()?.to_string();
        let r = name.parse().map_err(|_| self.error(format!("unknown relation {name:?}")))?;
        self.expect(close)?;
        Ok(r)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("!") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("<") {
            let r = self.relation(">")?;
            return Ok(Formula::diamond(r, self.unary()?));
        }
        if self.eat("[") {
            let r = self.relation("]")?;
            return Ok(Formula::boxed(r, self.unary()?));
        }
        if self.eat("(") {
            let f = self.or()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        let head = self.ident()?.to_string();
        if head == "true" {
            self.skip_ws();
            if !self.rest().starts_with('(') {
                return Ok(Formula::True);
            }
        }
        let func: FeatureFn = head.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("unknown feature function {head:?}"),
        })?;
        self.expect("(")?;
        let attr_pos = self.pos;
        let attr_name = self.ident()?.to_string();
        let attr = match attr_name.strip_prefix('#') {
            Some(idx) => idx.parse().ok().filter(|&i: &usize| i < self.names.len() || self.names.is_empty()),
            None => self.names.iter().position(|n| *n == attr_name),
        }
        .ok_or_else(|| Error::Parse {
            pos: attr_pos,
            msg: format!("unknown attribute {attr_name:?}"),
        })?;
        self.expect(")")?;
        let op = if self.eat(">=") {
            Op::Ge
        } else if self.eat("<=") {
            Op::Le
        } else {
            return Err(self.error("expected >= or <="));
        };
        self.skip_ws();
        let num_start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(self.rest().len());
        self.pos += len;
        let threshold: f64 = self.src[num_start..self.pos]
            .parse()
            .map_err(|_| Error::Parse {
                pos: num_start,
                msg: "expected a number".into(),
            })?;
        Ok(Formula::Atom(Atom::new(func, attr, op, threshold)))
    }
}
