//! Finite programs denoting infinite subsets of the positive integers, and the
//! identification of the positive integers with the binary tree `2^{<ω}`.
//!
//! Tree coding is heap order: a string `s` maps to the integer whose binary
//! expansion is `1` followed by the bits of `s`, so the root is 1, `"0"` is 2,
//! `"1"` is 3 and the parent of a node `c` is `c >> 1`. The depth of a node is
//! its dyadic block index, which makes the weight `λ_c = 2^{-|s|}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{block_of, block_range, FiniteSet};

/// A finite binary string, written as `"0110"`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Syntax(format!("bad binary string {text:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        BitString::parse(&s)
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

pub fn tree_code(s: &BitString) -> Result<u64> {
    if s.len() > 62 {
        return Err(Error::InvalidArgument("tree node deeper than 62 levels".into()));
    }
    Ok(s.bits().iter().fold(1u64, |c, &b| 2 * c + b as u64))
}

pub fn tree_decode(code: u64) -> Result<BitString> {
    if code == 0 {
        return Err(Error::InvalidArgument("0 is not a tree code".into()));
    }
    let depth = block_of(code);
    Ok(BitString((0..depth).rev().map(|i| (code >> i) & 1 == 1).collect()))
}

/// `|s|` for the node coded by `code`.
pub fn tree_depth(code: u64) -> u32 {
    block_of(code)
}

/// Non-strict prefix order on codes.
pub fn is_tree_prefix(t: u64, s: u64) -> bool {
    let (dt, ds) = (tree_depth(t), tree_depth(s));
    dt <= ds && s >> (ds - dt) == t
}

/// How many leading points of block `n` a [`SetGenerator::BlockPrefix`] takes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum PrefixRule {
    Full,
    One,
    Zero,
    /// `⌊2^n/n⌋` for `n ≥ 1`; block 0 contributes its single point.
    Farah,
    /// `2^{n-k}` with `k = ⌊log₂ n⌋` for `n ≥ 1`; block 0 contributes its point.
    HalvedByLog,
    /// `2^{n-shift}` for `n ≥ shift`, nothing below.
    Dyadic(u32),
    Table {
        counts: Vec<u64>,
        default: Box<PrefixRule>,
    },
}

impl PrefixRule {
    pub fn count(&self, n: u32) -> u64 {
        let size = 1u64 << n;
        let raw = match self {
            PrefixRule::Full => size,
            PrefixRule::One => 1,
            PrefixRule::Zero => 0,
            PrefixRule::Farah => {
                if n == 0 {
                    1
                } else {
                    size / n as u64
                }
            }
            PrefixRule::HalvedByLog => {
                if n == 0 {
                    1
                } else {
                    size >> block_of(n as u64)
                }
            }
            PrefixRule::Dyadic(shift) => {
                if n >= *shift {
                    size >> shift
                } else {
                    0
                }
            }
            PrefixRule::Table { counts, default } => match counts.get(n as usize) {
                Some(&c) => c,
                None => default.count(n),
            },
        };
        raw.min(size)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetGenerator {
    ExplicitFinite {
        set: FiniteSet,
    },
    AllIndices {},
    BlockPrefix {
        rule: PrefixRule,
    },
    /// Union of the blocks `P_n` for `n` in the inner set.
    BlocksUnion {
        blocks: Box<SetGenerator>,
    },
    /// Codes of `f↾n` for the periodic branch `f = period^∞`.
    TreeBranch {
        period: BitString,
    },
    /// Codes of `(f↾n)⌢(1-f(n))`: the siblings hanging off a periodic branch,
    /// an infinite antichain.
    TreeComb {
        period: BitString,
    },
    Union {
        left: Box<SetGenerator>,
        right: Box<SetGenerator>,
    },
    Intersect {
        left: Box<SetGenerator>,
        right: Box<SetGenerator>,
    },
    Minus {
        left: Box<SetGenerator>,
        right: Box<SetGenerator>,
    },
    TailFrom {
        from: u64,
        base: Box<SetGenerator>,
    },
}

impl SetGenerator {
    pub fn explicit(set: FiniteSet) -> Self {
        SetGenerator::ExplicitFinite { set }
    }

    pub fn block_prefix(rule: PrefixRule) -> Self {
        SetGenerator::BlockPrefix { rule }
    }

    pub fn tail_from(from: u64, base: SetGenerator) -> Self {
        SetGenerator::TailFrom { from, base: Box::new(base) }
    }

    pub fn union(left: SetGenerator, right: SetGenerator) -> Self {
        SetGenerator::Union { left: Box::new(left), right: Box::new(right) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetGenerator::TreeBranch { period } | SetGenerator::TreeComb { period } if period.is_empty() => {
                Err(Error::InvalidArgument("tree period must be non-empty".into()))
            }
            SetGenerator::BlocksUnion { blocks } => blocks.validate(),
            SetGenerator::Union { left, right }
            | SetGenerator::Intersect { left, right }
            | SetGenerator::Minus { left, right } => {
                left.validate()?;
                right.validate()
            }
            SetGenerator::TailFrom { base, .. } => base.validate(),
            _ => Ok(()),
        }
    }

    /// `A ∩ [1, n)` for the denoted set `A`.
    pub fn realize(&self, n: u64) -> FiniteSet {
        if n <= 1 {
            return FiniteSet::empty();
        }
        match self {
            SetGenerator::ExplicitFinite { set } => set.window(1, n),
            SetGenerator::AllIndices {} => FiniteSet::interval(1, n),
            SetGenerator::BlockPrefix { rule } => {
                let mut out = Vec::new();
                for b in 0..=block_of(n - 1) {
                    let (lo, _) = block_range(b);
                    let hi = (lo + rule.count(b)).min(n);
                    out.extend(lo..hi);
                }
                FiniteSet::from_sorted(out)
            }
            SetGenerator::BlocksUnion { blocks } => {
                let top = block_of(n - 1) as u64;
                let mut out = Vec::new();
                for b in blocks.realize(top + 1).iter() {
                    let (lo, hi) = block_range(b as u32);
                    out.extend(lo..hi.min(n));
                }
                FiniteSet::from_sorted(out)
            }
            SetGenerator::TreeBranch { period } => {
                let mut out = Vec::new();
                let mut code = 1u64;
                let mut i = 0usize;
                while code < n {
                    out.push(code);
                    let bit = period.bits()[i % period.len()] as u64;
                    match code.checked_mul(2) {
                        Some(c) => code = c + bit,
                        None => break,
                    }
                    i += 1;
                }
                FiniteSet::from_sorted(out)
            }
            SetGenerator::TreeComb { period } => {
                let mut out = Vec::new();
                let mut code = 1u64;
                let mut i = 0usize;
                while let Some(child) = code.checked_mul(2) {
                    if child >= n {
                        break;
                    }
                    let bit = period.bits()[i % period.len()] as u64;
                    let sibling = child + (1 - bit);
                    if sibling < n {
                        out.push(sibling);
                    }
                    code = child + bit;
                    i += 1;
                }
                FiniteSet::from_sorted(out)
            }
            SetGenerator::Union { left, right } => left.realize(n).union(&right.realize(n)),
            SetGenerator::Intersect { left, right } => left.realize(n).intersection(&right.realize(n)),
            SetGenerator::Minus { left, right } => left.realize(n).difference(&right.realize(n)),
            SetGenerator::TailFrom { from, base } => base.realize(n).window(*from, n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set;

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    #[test]
    fn codes() {
        assert_eq!(tree_code(&bits("")).unwrap(), 1);
        assert_eq!(tree_code(&bits("0")).unwrap(), 2);
        assert_eq!(tree_code(&bits("1")).unwrap(), 3);
        assert_eq!(tree_code(&bits("01")).unwrap(), 5);
        assert_eq!(tree_decode(11).unwrap(), bits("011"));
        assert!(tree_decode(0).is_err());
        assert!(is_tree_prefix(1, 5));
        assert!(is_tree_prefix(2, 5));
        assert!(!is_tree_prefix(3, 5));
        assert!(!is_tree_prefix(5, 2));
    }

    #[test]
    fn realize_examples() {
        let one = SetGenerator::block_prefix(PrefixRule::One);
        assert_eq!(one.realize(9), set![1, 2, 4, 8]);
        let halved = SetGenerator::block_prefix(PrefixRule::HalvedByLog);
        assert_eq!(halved.realize(16), set![1, 2, 3, 4, 5, 8, 9, 10, 11]);
        let branch = SetGenerator::TreeBranch { period: bits("0") };
        assert_eq!(branch.realize(9), set![1, 2, 4, 8]);
        let comb = SetGenerator::TreeComb { period: bits("0") };
        assert_eq!(comb.realize(20), set![3, 5, 9, 17]);
        let farah = SetGenerator::block_prefix(PrefixRule::Farah);
        assert_eq!(farah.realize(16), set![1, 2, 3, 4, 5, 8, 9]);
    }

    #[test]
    fn combinators() {
        let all = SetGenerator::AllIndices {};
        let tail = SetGenerator::tail_from(5, all.clone());
        assert_eq!(tail.realize(8), set![5, 6, 7]);
        let blocks = SetGenerator::BlocksUnion { blocks: Box::new(SetGenerator::explicit(set![1, 3])) };
        assert_eq!(blocks.realize(12), set![2, 3, 8, 9, 10, 11]);
        let minus = SetGenerator::Minus { left: Box::new(all), right: Box::new(blocks) };
        assert_eq!(minus.realize(9), set![1, 4, 5, 6, 7]);
    }

    #[test]
    fn json_shape() {
        let g: SetGenerator =
            serde_json::from_str(r#"{"kind":"block-prefix","rule":{"table":{"counts":[0,0],"default":"one"}}}"#)
                .unwrap();
        assert_eq!(g.realize(9), set![4, 8]);
        let g: SetGenerator = serde_json::from_str(r#"{"kind":"tree-branch","period":"01"}"#).unwrap();
        assert_eq!(g.realize(32), set![1, 2, 5, 10, 21]);
        let bad: std::result::Result<SetGenerator, _> = serde_json::from_str(r#"{"kind":"all-indices","extra":1}"#);
        assert!(bad.is_err());
        let bad: std::result::Result<SetGenerator, _> =
            serde_json::from_str(r#"{"kind":"tail-from","from":2,"base":{"kind":"all-indices"},"x":0}"#);
        assert!(bad.is_err());
    }
}
