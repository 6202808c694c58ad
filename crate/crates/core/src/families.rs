//! Hereditary families of finite sets of positive integers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{block_of, FiniteSet};
use crate::ordinal::{depth_cap, Ordinal};
use crate::schreier::Membership;
use crate::setgen::{is_tree_prefix, BitString, PrefixRule, SetGenerator};

/// Per-block cardinality caps `cap(n)` for the dyadic blocks `P_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum CapRule {
    /// `2^n`, i.e. no constraint.
    Full,
    /// `⌊2^n/n⌋` for `n ≥ 1`; block 0 is uncapped.
    Farah,
    One,
    /// `n` for `n ≥ 1`, and 1 on block 0.
    Linear,
    Custom {
        table: Vec<u64>,
        default: Box<CapRule>,
    },
}

impl CapRule {
    pub fn cap(&self, n: u32) -> u64 {
        let size = 1u64 << n.min(63);
        let raw = match self {
            CapRule::Full => size,
            CapRule::Farah => {
                if n == 0 {
                    1
                } else {
                    size / n as u64
                }
            }
            CapRule::One => 1,
            CapRule::Linear => (n as u64).max(1),
            CapRule::Custom { table, default } => match table.get(n as usize) {
                Some(&c) => c,
                None => default.cap(n),
            },
        };
        raw.min(size)
    }

    pub fn validate(&self) -> Result<()> {
        if let CapRule::Custom { table, default } = self {
            if table.contains(&0) {
                return Err(Error::InvalidArgument("block caps must be at least 1".into()));
            }
            default.validate()?;
        }
        Ok(())
    }

    /// The matching prefix rule: the first `cap(n)` points of every block.
    pub fn as_prefix_rule(&self) -> PrefixRule {
        match self {
            CapRule::Full => PrefixRule::Full,
            CapRule::Farah => PrefixRule::Farah,
            CapRule::One => PrefixRule::One,
            _ => PrefixRule::Table {
                counts: (0..=62).map(|n| self.cap(n)).collect(),
                default: Box::new(PrefixRule::Full),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// Hereditary closure of the listed sets.
    Explicit {
        members: Vec<FiniteSet>,
    },
    Singletons {},
    AllFinite {},
    /// Subsets of a single block `P_n`.
    PartitionBlocks {},
    BlockCappedJoined {
        cap: CapRule,
    },
    BlockCappedLocal {
        cap: CapRule,
    },
    Schreier {
        alpha: Ordinal,
    },
    /// Finite antichains of `2^{<ω}` under the heap coding.
    Antichains {},
    Restrict {
        base: Box<Family>,
        window: FiniteSet,
    },
}

impl Family {
    pub fn schreier(alpha: Ordinal) -> Self {
        Family::Schreier { alpha }
    }

    pub fn farah() -> Self {
        Family::BlockCappedJoined { cap: CapRule::Farah }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Family::BlockCappedJoined { cap } | Family::BlockCappedLocal { cap } => cap.validate(),
            Family::Schreier { alpha } => {
                let (depth, cap) = (alpha.depth(), depth_cap());
                if depth > cap {
                    Err(Error::DepthCap { depth, cap })
                } else {
                    Ok(())
                }
            }
            Family::Restrict { base, .. } => base.validate(),
            _ => Ok(()),
        }
    }

    pub fn is_hereditary(&self) -> bool {
        true
    }

    /// Whether every singleton `{k}`, `k ≥ 1`, is a member.
    pub fn covers_universe(&self) -> bool {
        !matches!(self, Family::Explicit { .. } | Family::Restrict { .. })
    }

    pub fn contains(&self, set: &FiniteSet) -> bool {
        family_contains(self, set)
    }
}

pub fn family_contains(f: &Family, set: &FiniteSet) -> bool {
    Tester::new(f).contains(set.elements())
}

/// Membership tester that keeps Schreier memo tables alive across queries.
pub(crate) struct Tester<'a> {
    family: &'a Family,
    schreier: Membership,
    inner: Option<Box<Tester<'a>>>,
}

impl<'a> Tester<'a> {
    pub(crate) fn new(family: &'a Family) -> Self {
        let inner = match family {
            Family::Restrict { base, .. } => Some(Box::new(Tester::new(base))),
            _ => None,
        };
        Tester { family, schreier: Membership::new(), inner }
    }

    pub(crate) fn contains(&mut self, f: &[u64]) -> bool {
        if f.is_empty() {
            return true;
        }
        match self.family {
            Family::Explicit { members } => members.iter().any(|m| f.iter().all(|&k| m.contains(k))),
            Family::Singletons {} => f.len() <= 1,
            Family::AllFinite {} => true,
            Family::PartitionBlocks {} => {
                let b = block_of(f[0]);
                f.iter().all(|&k| block_of(k) == b)
            }
            Family::BlockCappedJoined { cap } => {
                FiniteSet::from_sorted(f.to_vec()).block_counts().iter().all(|&(b, c)| c as u64 <= cap.cap(b))
            }
            Family::BlockCappedLocal { cap } => {
                let b = block_of(f[0]);
                f.iter().all(|&k| block_of(k) == b) && f.len() as u64 <= cap.cap(b)
            }
            Family::Schreier { alpha } => self.schreier.contains(alpha, f),
            Family::Antichains {} => f.iter().enumerate().all(|(i, &s)| f[..i].iter().all(|&t| !is_tree_prefix(t, s))),
            Family::Restrict { window, .. } => {
                f.iter().all(|&k| window.contains(k)) && self.inner.as_mut().expect("restrict has a base").contains(f)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub members: Vec<FiniteSet>,
    pub truncated: bool,
}

/// Members contained in `[1, n)`, by size and then lexicographically.
pub fn enumerate_members(f: &Family, n: u64, max_count: Option<usize>) -> Enumeration {
    let mut tester = Tester::new(f);
    let limit = max_count.unwrap_or(usize::MAX);
    let mut members = vec![FiniteSet::empty()];
    let mut level = vec![Vec::<u64>::new()];
    let mut truncated = members.len() > limit;
    while !level.is_empty() && !truncated {
        let mut next = Vec::new();
        'outer: for set in &level {
            let start = set.last().map_or(1, |&m| m + 1);
            for k in start..n {
                let mut cand = set.clone();
                cand.push(k);
                if tester.contains(&cand) {
                    if members.len() == limit {
                        truncated = true;
                        break 'outer;
                    }
                    members.push(FiniteSet::from_sorted(cand.clone()));
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    members.truncate(limit);
    Enumeration { members, truncated }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaSystem {
    pub indices: Vec<usize>,
    pub sets: Vec<FiniteSet>,
    pub root: FiniteSet,
}

/// Searches for `m` of the given sets with a common pairwise intersection.
///
/// Roots are tried by size and then lexicographically among all subsets of
/// the inputs; for each root the earliest index sequence is returned.
pub fn delta_system_extract(sets: &[FiniteSet], m: usize) -> Result<Option<DeltaSystem>> {
    if m < 2 {
        return Err(Error::InvalidArgument("a delta-system needs m >= 2".into()));
    }
    let mut roots = BTreeSet::new();
    for s in sets {
        let e = s.elements();
        if e.len() > 16 {
            return Err(Error::InvalidArgument("sets larger than 16 elements".into()));
        }
        for mask in 0u32..(1 << e.len()) {
            let r: Vec<u64> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
            roots.insert((r.len(), r));
        }
    }
    for (_, root) in roots {
        let root = FiniteSet::from_sorted(root);
        let cands: Vec<usize> = (0..sets.len()).filter(|&i| root.is_subset(&sets[i])).collect();
        if cands.len() < m {
            continue;
        }
        let mut chosen = Vec::new();
        if extend_delta(sets, &cands, 0, m, &root, &mut chosen) {
            return Ok(Some(DeltaSystem {
                sets: chosen.iter().map(|&i| sets[i].clone()).collect(),
                indices: chosen,
                root,
            }));
        }
    }
    Ok(None)
}

fn extend_delta(
    sets: &[FiniteSet],
    cands: &[usize],
    from: usize,
    m: usize,
    root: &FiniteSet,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == m {
        return true;
    }
    for (pos, &i) in cands.iter().enumerate().skip(from) {
        if cands.len() - pos < m - chosen.len() {
            break;
        }
        if chosen.iter().all(|&j| sets[j].intersection(&sets[i]) == *root) {
            chosen.push(i);
            if extend_delta(sets, cands, pos + 1, m, root, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Whether every initial segment of `realize(g, n)` is a member. For a
/// hereditary family this is membership of the whole window.
pub fn chain_witness_check(f: &Family, g: &SetGenerator, n: u64) -> bool {
    family_contains(f, &g.realize(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PrecompactStatus {
    Precompact { reason: String },
    NotPrecompact { witness: SetGenerator },
    Unknown,
}

pub fn precompact_status(f: &Family) -> PrecompactStatus {
    let yes = |reason: &str| PrecompactStatus::Precompact { reason: reason.into() };
    match f {
        Family::Explicit { .. } => yes("finitely many members"),
        Family::Restrict { .. } => yes("members live in a finite window"),
        Family::Singletons {} => yes("members have at most one element"),
        Family::PartitionBlocks {} | Family::BlockCappedLocal { .. } => {
            yes("every member lies inside one finite block")
        }
        Family::Schreier { .. } => yes("Schreier families are compact"),
        Family::AllFinite {} => PrecompactStatus::NotPrecompact { witness: SetGenerator::AllIndices {} },
        Family::BlockCappedJoined { .. } => {
            PrecompactStatus::NotPrecompact { witness: SetGenerator::block_prefix(PrefixRule::One) }
        }
        Family::Antichains {} => {
            PrecompactStatus::NotPrecompact { witness: SetGenerator::TreeComb { period: BitString::new(vec![false]) } }
        }
    }
}

/// Cantor–Bendixson rank of the family as a subset of `2^ω`, for catalog
/// kinds whose rank is known.
pub fn symbolic_rank(f: &Family) -> Option<Ordinal> {
    match f {
        Family::Schreier { alpha } => Some(Ordinal::omega_pow(alpha.clone(), 1).add_finite(1)),
        Family::Explicit { .. } | Family::Restrict { .. } => Some(Ordinal::finite(1)),
        Family::Singletons {} | Family::PartitionBlocks {} | Family::BlockCappedLocal { .. } => {
            Some(Ordinal::finite(2))
        }
        _ => None,
    }
}

/// First violation of spreading inside `[1, window)`: a member `F` and a set
/// `G` of the same size with `G ≥ F` pointwise that is not a member.
///
/// Any such `G` is reached from `F` by raising one element by one at a time,
/// so only those single steps are tested. Members are scanned by decreasing
/// size and then lexicographically; steps raise later elements first.
pub fn spreading_check(f: &Family, window: u64) -> Result<Option<(FiniteSet, FiniteSet)>> {
    if window > 24 {
        return Err(Error::InvalidArgument("spreading window larger than 24".into()));
    }
    let mut members = enumerate_members(f, window, None).members;
    members.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut tester = Tester::new(f);
    for m in &members {
        let e = m.elements();
        for i in (0..e.len()).rev() {
            let bound = e.get(i + 1).copied().unwrap_or(window);
            if e[i] + 1 < bound {
                let mut g = e.to_vec();
                g[i] += 1;
                if !tester.contains(&g) {
                    return Ok(Some((m.clone(), FiniteSet::from_sorted(g))));
                }
            }
        }
    }
    Ok(None)
}
