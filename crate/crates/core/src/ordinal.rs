//! Ordinals below `ω^ω^ω` in Cantor normal form.
//!
//! Ordinals index Schreier families. Only comparison and the canonical
//! fundamental sequence are exposed; addition exists internally to normalise
//! parsed input such as `1+w`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_DEPTH_CAP: usize = 3;

static DEPTH_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DEPTH_CAP);

/// Process-wide nesting cap applied by [`Ordinal::parse`] and the Schreier
/// operations.
pub fn depth_cap() -> usize {
    DEPTH_CAP.load(AtomicOrdering::Relaxed)
}

pub fn set_depth_cap(cap: usize) {
    DEPTH_CAP.store(cap, AtomicOrdering::Relaxed);
}

/// An ordinal `ω^e_1·c_1 + … + ω^e_r·c_r` with `e_1 > … > e_r` and `c_i ≥ 1`.
/// The empty term list is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(Self::zero(), n)] }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::finite(1), 1)
    }

    /// `ω^exp · coeff`.
    pub fn omega_pow(exp: Ordinal, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(exp, coeff)] }
        }
    }

    /// Builds from raw terms, rejecting lists that are not in normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(Error::InvalidArgument("exponents must strictly decrease".into()));
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(Error::InvalidArgument("coefficients must be positive".into()));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    /// Nesting depth: 0 for zero, `1 + max depth(exponent)` otherwise.
    /// Values of depth at most 3 are exactly those below `ω^ω^ω`.
    pub fn depth(&self) -> usize {
        self.terms.iter().map(|(e, _)| 1 + e.depth()).max().unwrap_or(0)
    }

    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a term");
        if last.1 == 1 {
            terms.pop();
        } else {
            last.1 -= 1;
        }
        Some(Ordinal { terms })
    }

    /// Splits `γ + n` into the largest limit-or-zero part `γ` and the finite
    /// tail `n`.
    pub fn split_finite(&self) -> (Ordinal, u64) {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => {
                let head = Ordinal { terms: self.terms[..self.terms.len() - 1].to_vec() };
                (head, *c)
            }
            _ => (self.clone(), 0),
        }
    }

    pub fn add_finite(&self, n: u64) -> Ordinal {
        self.add(&Ordinal::finite(n))
    }

    /// Ordinal sum; terms of `self` below the leading exponent of `rhs` are
    /// absorbed.
    pub(crate) fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some((lead, lead_c)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, u64)> = self.terms.iter().filter(|(e, _)| e >= lead).cloned().collect();
        match terms.last_mut() {
            Some((e, c)) if e == lead => {
                *c += lead_c;
                terms.extend(rhs.terms[1..].iter().cloned());
            }
            _ => terms.extend(rhs.terms.iter().cloned()),
        }
        Ordinal { terms }
    }

    /// Canonical fundamental sequence, indexed from `k = 1`.
    ///
    /// For `γ + ω^(β+1)` this is `γ + ω^β·k`; for `γ + ω^β` with `β` a limit it
    /// is `γ + ω^(β[k])`.
    pub fn fundamental(&self, k: u64) -> Result<Ordinal> {
        if k == 0 {
            return Err(Error::InvalidArgument("fundamental sequences start at k = 1".into()));
        }
        if !self.is_limit() {
            return Err(Error::InvalidArgument(format!("{self} is not a limit ordinal")));
        }
        let mut terms = self.terms.clone();
        let (exp, coeff) = terms.pop().expect("limit has a term");
        if coeff > 1 {
            terms.push((exp.clone(), coeff - 1));
        }
        let prefix = Ordinal { terms };
        let step = if exp.is_successor() {
            Ordinal::omega_pow(exp.predecessor().expect("successor"), k)
        } else {
            Ordinal::omega_pow(exp.fundamental(k)?, 1)
        };
        Ok(prefix.add(&step))
    }

    /// Parses with the process-wide depth cap.
    pub fn parse(text: &str) -> Result<Ordinal> {
        Self::parse_with_cap(text, depth_cap())
    }

    pub fn parse_with_cap(text: &str, cap: usize) -> Result<Ordinal> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, text };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        let depth = value.depth();
        if depth > cap {
            return Err(Error::DepthCap { depth, cap });
        }
        Ok(value)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if exp.is_zero() {
                write!(f, "{coeff}")?;
                continue;
            }
            write!(f, "w")?;
            if exp.as_finite() != Some(1) {
                let simple = exp.as_finite().is_some() || (exp.terms.len() == 1 && exp.terms[0].1 == 1);
                if simple {
                    write!(f, "^{exp}")?;
                } else {
                    write!(f, "^({exp})")?;
                }
            }
            if *coeff > 1 {
                write!(f, "*{coeff}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ordinal::parse(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Ordinal::parse(&text).map_err(serde::de::Error::custom)
    }
}

// expr := term ('+' term)*
// term := 'w' ('^' atom)? ('*' nat)? | nat
// atom := nat | 'w' ('^' atom)? | '(' expr ')'
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Syntax(format!("{what} at offset {} in {:?}", self.pos, self.text))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_omega(&mut self) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with("ω".as_bytes()) {
            self.pos += "ω".len();
            return true;
        }
        self.eat(b'w')
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        self.text[start..self.pos].parse().map_err(|_| self.error("number too large"))
    }

    fn expr(&mut self) -> Result<Ordinal> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let next = self.term()?;
            acc = acc.add(&next);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal> {
        if self.eat_omega() {
            let exp = if self.eat(b'^') { self.atom()? } else { Ordinal::finite(1) };
            let coeff = if self.eat(b'*') { self.nat()? } else { 1 };
            Ok(Ordinal::omega_pow(exp, coeff))
        } else {
            Ok(Ordinal::finite(self.nat()?))
        }
    }

    fn atom(&mut self) -> Result<Ordinal> {
        if self.eat(b'(') {
            let e = self.expr()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            Ok(e)
        } else if self.eat_omega() {
            let exp = if self.eat(b'^') { self.atom()? } else { Ordinal::finite(1) };
            Ok(Ordinal::omega_pow(exp, 1))
        } else {
            Ok(Ordinal::finite(self.nat()?))
        }
    }
}
