use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of the dyadic block `P_n = [2^n, 2^{n+1})` containing `k ≥ 1`.
pub fn block_of(k: u64) -> u32 {
    debug_assert!(k >= 1);
    63 - k.leading_zeros()
}

/// Half-open range `[2^n, 2^{n+1})`.
pub fn block_range(n: u32) -> (u64, u64) {
    (1u64 << n, 1u64 << (n + 1))
}

/// A finite set of positive integers, kept strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteSet(Vec<u64>);

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet(Vec::new())
    }

    /// Sorts and deduplicates; index 0 is rejected.
    pub fn new(mut elems: Vec<u64>) -> Result<Self> {
        if elems.contains(&0) {
            return Err(Error::InvalidArgument("set elements must be positive integers".into()));
        }
        elems.sort_unstable();
        elems.dedup();
        Ok(FiniteSet(elems))
    }

    pub(crate) fn from_sorted(elems: Vec<u64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.first().is_none_or(|&x| x >= 1));
        FiniteSet(elems)
    }

    /// `[lo, hi)`, clamped below at 1.
    pub fn interval(lo: u64, hi: u64) -> Self {
        FiniteSet((lo.max(1)..hi).collect())
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn contains(&self, k: u64) -> bool {
        self.0.binary_search(&k).is_ok()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.0.iter().all(|&k| other.contains(k))
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        let mut v: Vec<u64> = self.0.iter().chain(&other.0).copied().collect();
        v.sort_unstable();
        v.dedup();
        FiniteSet(v)
    }

    pub fn intersection(&self, other: &FiniteSet) -> FiniteSet {
        FiniteSet(self.0.iter().copied().filter(|&k| other.contains(k)).collect())
    }

    pub fn difference(&self, other: &FiniteSet) -> FiniteSet {
        FiniteSet(self.0.iter().copied().filter(|&k| !other.contains(k)).collect())
    }

    /// Elements in `[lo, hi)`.
    pub fn window(&self, lo: u64, hi: u64) -> FiniteSet {
        FiniteSet(self.0.iter().copied().filter(|&k| k >= lo && k < hi).collect())
    }

    /// Number of elements in each dyadic block, as `(block, count)` pairs.
    pub fn block_counts(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &k in &self.0 {
            let b = block_of(k);
            match out.last_mut() {
                Some((last, c)) if *last == b => *c += 1,
                _ => out.push((b, 1)),
            }
        }
        out
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

impl TryFrom<Vec<u64>> for FiniteSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteSet::new(v)
    }
}

impl From<FiniteSet> for Vec<u64> {
    fn from(s: FiniteSet) -> Self {
        s.0
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "}}")
    }
}

/// Convenience constructor for tests and examples; panics on 0.
#[macro_export]
macro_rules! set {
    () => { $crate::FiniteSet::empty() };
    ($($x:expr),+ $(,)?) => { $crate::FiniteSet::new(vec![$($x as u64),+]).expect("positive elements") };
}
