//! Schreier families `S_α`: membership, the exact norm optimizer, and the
//! quantitative witnesses for the ideals `I_α`.
//!
//! `S_0` holds the sets with at most one element, `S_{β+1}` the unions
//! `E_1 < … < E_n` of members of `S_β` with `n ≤ min E_1`, and for a limit
//! `α` with fundamental sequence `ξ_k`, `S_α` holds the sets that lie in some
//! `S_{ξ_k}` with `k ≤ min F`.
//!
//! A set of `S_{β+j} \ S_{β+j-1}` has at least `j + 1` elements, so on sets of
//! size `m` the family `S_{β+j}` coincides with `S_{β+min(j,m)}`. Both the
//! membership test and the optimizer cap finite parts this way.

use std::collections::HashMap;
use std::ops::{Add, Sub};
use std::rc::Rc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{enumerate_members, Family};
use crate::finset::{block_range, FiniteSet};
use crate::ordinal::{depth_cap, Ordinal};
use crate::rational::{self, Rational};
use crate::setgen::{PrefixRule, SetGenerator};
use crate::submeasures::{phi, phi_trace, SubmeasureSpec, WeightSeq};

pub(crate) fn cap_finite(alpha: &Ordinal, m: usize) -> Ordinal {
    let (head, n) = alpha.split_finite();
    if n > m as u64 {
        head.add_finite(m as u64)
    } else {
        alpha.clone()
    }
}

fn check_depth(alpha: &Ordinal) -> Result<()> {
    let (depth, cap) = (alpha.depth(), depth_cap());
    if depth > cap {
        return Err(Error::DepthCap { depth, cap });
    }
    Ok(())
}

/// Recursive membership test with memoisation on `(ordinal, i, j)` for the
/// contiguous runs `F[i..j]` of the queried set.
#[derive(Debug, Default)]
pub struct Membership {
    memo: HashMap<(Ordinal, usize, usize), bool>,
    recursive_only: bool,
}

impl Membership {
    pub fn new() -> Self {
        Self::default()
    }

    /// Disables the closed form `|F| ≤ min F` used for `S_1`.
    pub fn recursive_only() -> Self {
        Membership { memo: HashMap::new(), recursive_only: true }
    }

    pub fn contains(&mut self, alpha: &Ordinal, f: &[u64]) -> bool {
        self.memo.clear();
        self.run(alpha, f, 0, f.len())
    }

    fn run(&mut self, alpha: &Ordinal, f: &[u64], i: usize, j: usize) -> bool {
        let len = j - i;
        if len <= 1 {
            return true;
        }
        if alpha.is_zero() {
            return false;
        }
        if !self.recursive_only && alpha.as_finite() == Some(1) {
            return len as u64 <= f[i];
        }
        let alpha = cap_finite(alpha, len);
        let key = (alpha, i, j);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let alpha = &key.0;
        let v = match alpha.predecessor() {
            Some(beta) => self.min_pieces(&beta, f, i, j) <= f[i],
            None => {
                let mut prev: Option<Ordinal> = None;
                let mut found = false;
                for k in 1..=f[i] {
                    let xi = cap_finite(&alpha.fundamental(k).expect("limit ordinal"), len);
                    if prev.as_ref() == Some(&xi) {
                        break;
                    }
                    if self.run(&xi, f, i, j) {
                        found = true;
                        break;
                    }
                    prev = Some(xi);
                }
                found
            }
        };
        self.memo.insert(key, v);
        v
    }

    /// Fewest consecutive `S_β` pieces covering `F[i..j]`. The lowest valid
    /// start of a piece ending at `t` never decreases in `t`, and neither does
    /// the optimum, so a single pointer sweep is exact.
    fn min_pieces(&mut self, beta: &Ordinal, f: &[u64], i: usize, j: usize) -> u64 {
        let mut g = vec![0u64; j - i + 1];
        let mut lo = i;
        for t in i + 1..=j {
            while !self.run(beta, f, lo, t) {
                lo += 1;
            }
            g[t - i] = g[lo - i] + 1;
        }
        g[j - i]
    }
}

pub fn schreier_contains(alpha: &Ordinal, set: &FiniteSet) -> Result<bool> {
    check_depth(alpha)?;
    Ok(Membership::new().contains(alpha, set.elements()))
}

pub(crate) trait Weight: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> Weight for T {}

/// `max{Σ_{i∈F} w_i : F ∈ S_α, F ⊆ f}` for nonnegative weights `w` on the
/// increasing positions `f`.
pub(crate) fn schreier_norm<T: Weight>(alpha: &Ordinal, f: &[u64], w: &[T]) -> T {
    if f.is_empty() {
        return T::zero();
    }
    if Membership::new().contains(alpha, f) {
        return w.iter().cloned().fold(T::zero(), |a, b| a + b);
    }
    if alpha.as_finite() == Some(1) {
        return schreier_one(f, w);
    }
    let m = f.len();
    let mut dp = NormDp { f, w, tables: HashMap::new() };
    let table = dp.table(alpha);
    table[m].clone()
}

/// `S_1` optimum: choose the least element `f_i`, then the `f_i - 1` heaviest
/// later positions.
fn schreier_one<T: Weight>(f: &[u64], w: &[T]) -> T {
    let m = f.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
    let mut rank = vec![0usize; m];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    let mut fen = Fenwick::new(m);
    let mut best = T::zero();
    for i in (0..m).rev() {
        let k = (f[i] - 1).min(m as u64) as usize;
        let v = w[i].clone() + fen.top(k);
        if v > best {
            best = v;
        }
        fen.insert(rank[i], w[i].clone());
    }
    best
}

struct Fenwick<T> {
    count: Vec<usize>,
    sum: Vec<T>,
    total: usize,
}

impl<T: Weight> Fenwick<T> {
    fn new(n: usize) -> Self {
        Fenwick { count: vec![0; n + 1], sum: vec![T::zero(); n + 1], total: 0 }
    }

    fn insert(&mut self, mut pos: usize, v: T) {
        self.total += 1;
        while pos < self.count.len() {
            self.count[pos] += 1;
            self.sum[pos] = self.sum[pos].clone() + v.clone();
            pos += pos & pos.wrapping_neg();
        }
    }

    /// Sum of the `k` smallest occupied ranks, i.e. the `k` heaviest weights.
    fn top(&self, k: usize) -> T {
        let n = self.count.len() - 1;
        let mut step = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        let (mut pos, mut left, mut acc) = (0usize, k.min(self.total), T::zero());
        while step > 0 {
            let next = pos + step;
            if next <= n && self.count[next] <= left {
                pos = next;
                left -= self.count[next];
                acc = acc + self.sum[next].clone();
            }
            step >>= 1;
        }
        acc
    }
}

/// Tables `best[a][b]`: optimum over `S_α` members inside positions `[a, b)`.
struct NormDp<'a, T> {
    f: &'a [u64],
    w: &'a [T],
    tables: HashMap<Ordinal, Rc<Vec<T>>>,
}

impl<T: Weight> NormDp<'_, T> {
    fn table(&mut self, alpha: &Ordinal) -> Rc<Vec<T>> {
        let m = self.f.len();
        let alpha = cap_finite(alpha, m);
        if let Some(t) = self.tables.get(&alpha) {
            return t.clone();
        }
        let n = m + 1;
        let mut t = vec![T::zero(); n * n];
        if alpha.is_zero() {
            for a in 0..m {
                let mut best = T::zero();
                for b in a + 1..=m {
                    if self.w[b - 1] > best {
                        best = self.w[b - 1].clone();
                    }
                    t[a * n + b] = best.clone();
                }
            }
        } else if let Some(beta) = alpha.predecessor() {
            let inner = self.table(&beta);
            for b in 1..=m {
                // g[i][r]: best with at most r pieces inside [i, b)
                let mut g: Vec<Vec<T>> = vec![Vec::new(); b + 1];
                g[b] = vec![T::zero()];
                for i in (0..b).rev() {
                    let mut row = vec![T::zero(); b - i + 1];
                    for r in 1..=b - i {
                        let mut best = row[r - 1].clone();
                        for s in i + 1..=b {
                            let v = inner[i * n + s].clone() + g[s][(r - 1).min(b - s)].clone();
                            if v > best {
                                best = v;
                            }
                        }
                        row[r] = best;
                    }
                    g[i] = row;
                }
                let mut best = T::zero();
                for i in (0..b).rev() {
                    let r = self.f[i].min((b - i) as u64) as usize;
                    if g[i][r] > best {
                        best = g[i][r].clone();
                    }
                    t[i * n + b] = best.clone();
                }
            }
        } else {
            let mut ladder: Vec<Rc<Vec<T>>> = Vec::new();
            let mut prev: Option<Ordinal> = None;
            for k in 1..=self.f[m - 1] {
                let xi = cap_finite(&alpha.fundamental(k).expect("limit ordinal"), m);
                if prev.as_ref() == Some(&xi) {
                    break;
                }
                ladder.push(self.table(&xi));
                prev = Some(xi);
            }
            for b in 1..=m {
                let mut best = T::zero();
                for i in (0..b).rev() {
                    let ks = self.f[i].min(ladder.len() as u64) as usize;
                    for tk in &ladder[..ks] {
                        if tk[i * n + b] > best {
                            best = tk[i * n + b].clone();
                        }
                    }
                    t[i * n + b] = best.clone();
                }
            }
        }
        let t = Rc::new(t);
        self.tables.insert(alpha, t.clone());
        t
    }
}

fn lambda_spec(alpha: &Ordinal) -> SubmeasureSpec {
    SubmeasureSpec::new(Family::schreier(alpha.clone()), WeightSeq::Lambda)
}

/// `φ_α(A) = Φ_{S_α}(P_A λ)`.
pub fn phi_alpha(alpha: &Ordinal, set: &FiniteSet) -> Result<Rational> {
    check_depth(alpha)?;
    Ok(phi(&lambda_spec(alpha), set))
}

pub const ESSENTIAL_MAX_WINDOW: u64 = 14;

/// Least `n` such that every member of `S_α` inside `[n, window)` lies in
/// `S_β`. `None` when no such `n` is informative on this window: either none
/// exists, or the least one is so large that `[n, window)` is itself in `S_β`
/// and the inclusion holds vacuously.
pub fn essential_inclusion_probe(alpha: &Ordinal, beta: &Ordinal, window: u64) -> Result<Option<u64>> {
    check_depth(alpha)?;
    check_depth(beta)?;
    if window > ESSENTIAL_MAX_WINDOW {
        return Err(Error::InvalidArgument(format!("window larger than {ESSENTIAL_MAX_WINDOW}")));
    }
    let members = enumerate_members(&Family::schreier(alpha.clone()), window, None).members;
    let mut tester = Membership::new();
    let n = members
        .iter()
        .filter(|f| !tester.contains(beta, f.elements()))
        .filter_map(|f| f.first())
        .map(|m| m + 1)
        .max()
        .unwrap_or(0);
    let rest = FiniteSet::interval(n, window);
    if n >= window || tester.contains(beta, rest.elements()) {
        return Ok(None);
    }
    Ok(Some(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummableLikeWitness {
    pub alpha: Ordinal,
    pub n: u32,
    #[serde(with = "rational::serde_str")]
    pub delta: Rational,
    pub sets: Vec<FiniteSet>,
    #[serde(with = "rational::serde_str_vec")]
    pub values: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub union_value: Rational,
}

pub const SUMMABLE_MAX_N: u32 = 4;

/// The sets `F_n`, `n < 2^N`, each made of the first `2^n` points of the
/// block `P_{N+n}`. Each has `φ_α(F_n) = 2^{-N}` while their union has
/// `φ_α = 1`; both values are recomputed and checked.
pub fn summable_like_witness(alpha: &Ordinal, n: u32) -> Result<SummableLikeWitness> {
    check_depth(alpha)?;
    if *alpha < Ordinal::finite(2) {
        return Err(Error::Precondition("needs alpha >= 2".into()));
    }
    if n > SUMMABLE_MAX_N {
        return Err(Error::Precondition(format!("needs N <= {SUMMABLE_MAX_N}")));
    }
    let delta = rational::pow2_neg(n);
    let sets: Vec<FiniteSet> = (0..1u32 << n)
        .map(|i| {
            let (lo, _) = block_range(n + i);
            FiniteSet::interval(lo, lo + (1u64 << i))
        })
        .collect();
    let values = sets.iter().map(|s| phi_alpha(alpha, s)).collect::<Result<Vec<_>>>()?;
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| **v != delta) {
        return Err(Error::Verification(format!("phi(F_{i}) = {v}, expected {delta}")));
    }
    let union = sets.iter().fold(FiniteSet::empty(), |a, s| a.union(s));
    let union_value = phi_alpha(alpha, &union)?;
    if union_value != Rational::one() {
        return Err(Error::Verification(format!("union value {union_value}, expected 1")));
    }
    Ok(SummableLikeWitness { alpha: alpha.clone(), n, delta, sets, values, union_value })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceTail {
    pub k: u32,
    pub block: u32,
    pub horizon: u64,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchreierWindow {
    pub k: u32,
    pub lo: u64,
    pub hi: u64,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceI2Witness {
    pub set: SetGenerator,
    pub tails: Vec<TraceTail>,
    pub s2_windows: Vec<SchreierWindow>,
}

pub const TRACE_MAX_K: u32 = 3;

/// For `A` = the first `2^{n-k}` points of every block `P_n`
/// (`n ∈ [2^k, 2^{k+1})`): the trace submeasure of `A ∩ [2^n, ∞)` is `2^{-k}`,
/// while `φ_2` of each window `A ∩ [2^{2^k}, 2^{2^{k+1}})` is at least 1.
pub fn trace_vs_i2_witness(k_max: u32) -> Result<TraceI2Witness> {
    if k_max > TRACE_MAX_K {
        return Err(Error::Precondition(format!("needs k_max <= {TRACE_MAX_K}")));
    }
    let gen = SetGenerator::block_prefix(PrefixRule::HalvedByLog);
    let antichains = SubmeasureSpec::new(Family::Antichains {}, WeightSeq::Lambda);
    let two = Ordinal::finite(2);
    let mut tails = Vec::new();
    let mut s2_windows = Vec::new();
    for k in 0..=k_max {
        let horizon = 1u64 << (1u32 << (k + 1));
        let a = gen.realize(horizon);
        let expect = rational::pow2_neg(k);
        for block in (1u32 << k)..(1u32 << (k + 1)) {
            let tail = a.window(1 << block, horizon);
            let value = phi_trace(&tail);
            let by_norm = phi(&antichains, &tail);
            if value != expect || by_norm != expect {
                return Err(Error::Verification(format!(
                    "trace tail from block {block}: {value} / {by_norm}, expected {expect}"
                )));
            }
            tails.push(TraceTail { k, block, horizon, value });
        }
        let lo = 1u64 << (1u32 << k);
        let value = phi_alpha(&two, &a.window(lo, horizon))?;
        if value < Rational::one() {
            return Err(Error::Verification(format!("phi_2 window [{lo},{horizon}) = {value} < 1")));
        }
        s2_windows.push(SchreierWindow { k, lo, hi: horizon, value });
    }
    Ok(TraceI2Witness { set: gen, tails, s2_windows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityBound {
    pub j: u32,
    pub start_block: u32,
    pub horizon: u64,
    pub block_counts: Vec<(u32, usize)>,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
}

/// With `ε = 2^{-j}` and `|A ∩ P_n| < ε 2^n` for every block `n ≥ start`
/// below the horizon, checks `φ_1(A ∩ [2^start, horizon)) ≤ (1 + j) ε`.
pub fn density_bound_check(j: u32, g: &SetGenerator, start: u32, horizon: u64) -> Result<DensityBound> {
    if j > 62 || start > 62 {
        return Err(Error::InvalidArgument("j and the start block must be at most 62".into()));
    }
    let window = g.realize(horizon).window(1 << start, horizon);
    let block_counts = window.block_counts();
    for &(b, c) in &block_counts {
        if (c as u128) << j >= 1u128 << b {
            return Err(Error::Precondition(format!("block {b} holds {c} points, not below 2^({b}-{j})")));
        }
    }
    let value = phi_alpha(&Ordinal::finite(1), &window)?;
    let bound = Rational::from_integer((1 + j).into()) * rational::pow2_neg(j);
    if value > bound {
        return Err(Error::Verification(format!("phi_1 = {value} exceeds {bound}")));
    }
    Ok(DensityBound { j, start_block: start, horizon, block_counts, value, bound })
}
