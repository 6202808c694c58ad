//! Structure probes for the spaces `EXH(Φ_F)`: exact certificates for copies
//! of `ℓ_1` and `c_0`, Schur functionals, the variation norm of dyadic
//! measures, and bounded searches for Pták sets and Mazur combinations.
//!
//! Searches only cover the candidate space they describe. Failing to find a
//! witness there is reported as such and never as non-existence.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{chain_witness_check, family_contains, Family};
use crate::finset::{block_of, FiniteSet};
use crate::norms::{ext_norm, FinVec};
use crate::rational::{self, Rational};
use crate::setgen::{tree_code, BitString, SetGenerator};
use crate::submeasures::{phi, SubmeasureSpec, WeightSeq};

/// Vectors with successive supports: `max supp x_k < min supp x_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FinVec>", into = "Vec<FinVec>")]
pub struct BlockSequence(Vec<FinVec>);

impl BlockSequence {
    pub fn new(blocks: Vec<FinVec>) -> Result<Self> {
        if blocks.iter().any(|b| b.is_zero()) {
            return Err(Error::InvalidArgument("blocks must be nonzero".into()));
        }
        for w in blocks.windows(2) {
            if w[0].support().last() >= w[1].support().first() {
                return Err(Error::InvalidArgument("block supports must be successive".into()));
            }
        }
        Ok(BlockSequence(blocks))
    }

    pub fn blocks(&self) -> &[FinVec] {
        &self.0
    }
}

impl TryFrom<Vec<FinVec>> for BlockSequence {
    type Error = Error;

    fn try_from(v: Vec<FinVec>) -> Result<Self> {
        BlockSequence::new(v)
    }
}

impl From<BlockSequence> for Vec<FinVec> {
    fn from(b: BlockSequence) -> Self {
        b.0
    }
}

/// A signed measure on `2^ω` determined by its values on the `2^depth` cells
/// of level `depth`; cell `c` is the cylinder of the `depth`-bit binary
/// expansion of `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadicMeasure {
    pub depth: u32,
    #[serde(with = "rational::serde_str_vec")]
    pub values: Vec<Rational>,
}

pub const MEASURE_MAX_DEPTH: u32 = 16;

impl DyadicMeasure {
    pub fn new(depth: u32, values: Vec<Rational>) -> Result<Self> {
        let m = DyadicMeasure { depth, values };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth > MEASURE_MAX_DEPTH {
            return Err(Error::InvalidArgument(format!("depth above {MEASURE_MAX_DEPTH}")));
        }
        if self.values.len() != 1usize << self.depth {
            return Err(Error::InvalidArgument(format!(
                "a depth-{} measure needs {} cell values",
                self.depth,
                1u64 << self.depth
            )));
        }
        Ok(())
    }

    /// `μ([t])` for the node with heap code `code`, of depth at most `depth`.
    pub fn cylinder(&self, code: u64) -> Rational {
        let e = block_of(code);
        debug_assert!(e <= self.depth);
        let shift = self.depth - e;
        let lo = ((code - (1 << e)) << shift) as usize;
        rational::sum(&self.values[lo..lo + (1usize << shift)])
    }

    /// `x_μ(t) = μ([t])` on all nodes of depth at most `depth`.
    pub fn node_vector(&self) -> FinVec {
        let mut x = FinVec::zero();
        for code in 1..(1u64 << (self.depth + 1)) {
            x.set(code, self.cylinder(code));
        }
        x
    }
}

/// `‖μ‖ = μ⁺(2^ω) + μ⁻(2^ω)`. Inside a cell the measure has constant sign, so
/// the cells already give the Hahn decomposition.
pub fn variation_norm(m: &DyadicMeasure) -> Rational {
    m.values.iter().fold(Rational::zero(), |a, v| a + v.abs())
}

/// Maximum of `Σ |μ(C)|` over all partitions of `2^ω` into basic clopen sets
/// of level at most `depth`, by exhaustive enumeration.
pub fn variation_by_partitions(m: &DyadicMeasure) -> Result<Rational> {
    if m.depth > 4 {
        return Err(Error::InvalidArgument("partition oracle limited to depth 4".into()));
    }
    fn best(m: &DyadicMeasure, code: u64) -> Vec<Rational> {
        // every partition of [code] into cylinders, as its value
        let own = m.cylinder(code).abs();
        if block_of(code) == m.depth {
            return vec![own];
        }
        let left = best(m, 2 * code);
        let right = best(m, 2 * code + 1);
        let mut out = vec![own];
        for l in &left {
            for r in &right {
                out.push(l + r);
            }
        }
        out
    }
    Ok(best(m, 1).into_iter().max().expect("nonempty"))
}

/// A finite union of half-open intervals `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intervals(pub Vec<(u64, u64)>);

impl Intervals {
    pub fn dyadic(a: u32, b: u32) -> Self {
        Intervals(vec![(1 << a, 1 << b)])
    }

    pub fn to_set(&self) -> FiniteSet {
        self.0.iter().fold(FiniteSet::empty(), |s, &(lo, hi)| s.union(&FiniteSet::interval(lo, hi)))
    }

    fn with(&self, lo: u64, hi: u64) -> Self {
        let mut v = self.0.clone();
        v.push((lo, hi));
        v.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::new();
        for (l, h) in v {
            match merged.last_mut() {
                Some(last) if l <= last.1 => last.1 = last.1.max(h),
                _ => merged.push((l, h)),
            }
        }
        Intervals(merged)
    }

    fn covers(&self, lo: u64, hi: u64) -> bool {
        self.0.iter().any(|&(l, h)| l <= lo && hi <= h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equality {
    pub vector: FinVec,
    #[serde(with = "rational::serde_str")]
    pub norm: Rational,
    #[serde(with = "rational::serde_str")]
    pub expected: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `Φ_F(a) = Σ|a_i|` for vectors on a chain of `F`.
    L1Copy { family: Family, generator: SetGenerator, n: u64, checks: Vec<Equality> },
    /// `Φ_{antichains}(x) = max|a_n|` for vectors on a branch.
    C0Branch { period: BitString, n: u64, checks: Vec<Equality> },
    /// The functional `x ↦ Σ_{i∈A'} x_i` separates every block from zero.
    Schur {
        family: Family,
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        set: FiniteSet,
        set_in_family: bool,
        blocks: BlockSequence,
        #[serde(with = "rational::serde_str_vec")]
        values: Vec<Rational>,
    },
    Variation {
        measure: DyadicMeasure,
        #[serde(with = "rational::serde_str")]
        variation: Rational,
        #[serde(with = "rational::serde_str")]
        antichain_norm: Rational,
    },
    /// `φ(E) < ε μ(E)`.
    PtakFill {
        family: Family,
        weights: WeightSeq,
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        set: Intervals,
        #[serde(with = "rational::serde_str")]
        phi: Rational,
        #[serde(with = "rational::serde_str")]
        mass: Rational,
        searched: String,
    },
    /// `y = Σ_{i∈G} (μ_i/μ(G)) x_i` and its exact norm.
    Mazur {
        family: Family,
        weights: WeightSeq,
        #[serde(skip_serializing_if = "Option::is_none")]
        blocks: Option<BlockSequence>,
        #[serde(with = "rational::serde_str")]
        epsilon: Rational,
        set: Intervals,
        #[serde(with = "rational::serde_str")]
        value: Rational,
        below_epsilon: bool,
        searched: String,
    },
    ExhFin {
        family: Family,
        weights: WeightSeq,
        generator: SetGenerator,
        horizon: u64,
        window_norms: Vec<Sample>,
        tails: Vec<Sample>,
        norms: NormTrend,
        #[serde(with = "rational::serde_str")]
        tail_floor: Rational,
        evidence: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub at: u64,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum NormTrend {
    BoundedNorms,
    DivergingNorms,
}

fn mismatch(what: &str) -> Error {
    Error::Verification(format!("certificate does not re-verify: {what}"))
}

impl Certificate {
    /// Recomputes every recorded value.
    pub fn verify(&self) -> Result<()> {
        match self {
            Certificate::L1Copy { family, generator, n, checks } => {
                if !chain_witness_check(family, generator, *n) {
                    return Err(mismatch("chain"));
                }
                for c in checks {
                    if ext_norm(family, &c.vector) != c.norm || c.vector.l1() != c.expected || c.norm != c.expected {
                        return Err(mismatch("l1 equality"));
                    }
                }
                Ok(())
            }
            Certificate::C0Branch { checks, .. } => {
                for c in checks {
                    let norm = ext_norm(&Family::Antichains {}, &c.vector);
                    if norm != c.norm || c.vector.max_abs() != c.expected || c.norm != c.expected {
                        return Err(mismatch("c0 equality"));
                    }
                }
                Ok(())
            }
            Certificate::Schur { family, epsilon, set, set_in_family, blocks, values } => {
                if family_contains(family, set) != *set_in_family {
                    return Err(mismatch("membership of A'"));
                }
                let half = epsilon / Rational::from_integer(2.into());
                for (x, v) in blocks.blocks().iter().zip(values) {
                    let s = x.iter().filter(|(k, _)| set.contains(*k)).fold(Rational::zero(), |a, (_, q)| a + q);
                    if s.abs() != *v || *v <= half {
                        return Err(mismatch("functional value"));
                    }
                }
                Ok(())
            }
            Certificate::Variation { measure, variation, antichain_norm } => {
                if variation_norm(measure) != *variation
                    || ext_norm(&Family::Antichains {}, &measure.node_vector()) != *antichain_norm
                    || variation != antichain_norm
                {
                    return Err(mismatch("variation identity"));
                }
                Ok(())
            }
            Certificate::PtakFill { family, weights, epsilon, set, phi: p, mass, .. } => {
                let e = set.to_set();
                let spec = SubmeasureSpec::new(family.clone(), weights.clone());
                if phi(&spec, &e) != *p || weights.mass(&e) != *mass || *p >= epsilon * mass {
                    return Err(mismatch("filling inequality"));
                }
                Ok(())
            }
            Certificate::Mazur { family, weights, blocks, epsilon, set, value, below_epsilon, .. } => {
                let v = mazur_value(family, weights, blocks.as_ref(), &set.to_set());
                if v != *value || (v < *epsilon) != *below_epsilon {
                    return Err(mismatch("combination norm"));
                }
                Ok(())
            }
            Certificate::ExhFin {
                family, weights, generator, horizon, window_norms, tails, norms, tail_floor, ..
            } => {
                let again = exh_vs_fin_probe(family, weights, generator, *horizon)?;
                match again {
                    Certificate::ExhFin { window_norms: w, tails: t, norms: n, tail_floor: f, .. }
                        if w == *window_norms && t == *tails && n == *norms && f == *tail_floor =>
                    {
                        Ok(())
                    }
                    _ => Err(mismatch("window norms")),
                }
            }
        }
    }
}

/// Checks `Φ_F(a) = Σ|a_i|` for samples supported on a chain of `F`.
pub fn l1_copy_check(f: &Family, g: &SetGenerator, n: u64, samples: &[FinVec]) -> Result<Certificate> {
    if !chain_witness_check(f, g, n) {
        return Err(Error::Precondition("the generated set is not a chain of the family".into()));
    }
    let chain = g.realize(n);
    let mut checks = Vec::new();
    for a in samples {
        if !a.support().is_subset(&chain) {
            return Err(Error::InvalidArgument("sample not supported on the chain".into()));
        }
        let norm = ext_norm(f, a);
        let expected = a.l1();
        if norm != expected {
            return Err(Error::Verification(format!("norm {norm} differs from l1 mass {expected}")));
        }
        checks.push(Equality { vector: a.clone(), norm, expected });
    }
    Ok(Certificate::L1Copy { family: f.clone(), generator: g.clone(), n, checks })
}

/// Checks `Φ_{antichains}(Σ a_n e_{f↾n}) = max|a_n|` along the periodic branch.
pub fn c0_branch_check(period: &BitString, n: u64, samples: &[Vec<Rational>]) -> Result<Certificate> {
    if period.is_empty() {
        return Err(Error::InvalidArgument("period must be non-empty".into()));
    }
    if n > 62 {
        return Err(Error::InvalidArgument("branch length above 62".into()));
    }
    let bits: Vec<bool> = (0..n as usize).map(|i| period.bits()[i % period.len()]).collect();
    let mut checks = Vec::new();
    for a in samples {
        if a.len() as u64 > n {
            return Err(Error::InvalidArgument("more coefficients than branch nodes".into()));
        }
        let mut x = FinVec::zero();
        for (i, q) in a.iter().enumerate() {
            x.set(tree_code(&BitString::new(bits[..i].to_vec()))?, q.clone());
        }
        let norm = ext_norm(&Family::Antichains {}, &x);
        let expected = x.max_abs();
        if norm != expected {
            return Err(Error::Verification(format!("norm {norm} differs from max {expected}")));
        }
        checks.push(Equality { vector: x, norm, expected });
    }
    Ok(Certificate::C0Branch { period: period.clone(), n, checks })
}

/// Splits each block on `A` into its positive and negative parts, keeps the
/// heavier part, and checks that the indicator of the union of kept parts
/// takes absolute value above `ε/2` on every block.
pub fn schur_witness(
    f: &Family,
    xs: &BlockSequence,
    eps: &Rational,
    g: &SetGenerator,
    horizon: u64,
) -> Result<Option<Certificate>> {
    let a = g.realize(horizon);
    let chain = family_contains(f, &a);
    let local = || xs.blocks().iter().all(|x| family_contains(f, &x.support().intersection(&a)));
    if !chain && !local() {
        return Err(Error::Precondition(
            "A is neither a chain of the family nor a member on each block support".into(),
        ));
    }
    let half = eps / Rational::from_integer(2.into());
    let mut chosen = Vec::new();
    let mut values = Vec::new();
    for x in xs.blocks() {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        let (mut sp, mut sn) = (Rational::zero(), Rational::zero());
        for (k, q) in x.iter().filter(|(k, _)| a.contains(*k)) {
            if q.is_positive() {
                pos.push(k);
                sp += q;
            } else {
                neg.push(k);
                sn -= q;
            }
        }
        let (side, v) = if sp >= sn { (pos, sp) } else { (neg, sn) };
        if v <= half {
            return Ok(None);
        }
        chosen.extend(side);
        values.push(v);
    }
    let set = FiniteSet::new(chosen)?;
    let set_in_family = family_contains(f, &set);
    Ok(Some(Certificate::Schur {
        family: f.clone(),
        epsilon: eps.clone(),
        set,
        set_in_family,
        blocks: xs.clone(),
        values,
    }))
}

pub fn variation_identity_check(m: &DyadicMeasure) -> Result<Certificate> {
    m.validate()?;
    let variation = variation_norm(m);
    let antichain_norm = ext_norm(&Family::Antichains {}, &m.node_vector());
    if variation != antichain_norm {
        return Err(Error::Verification(format!("variation {variation} differs from antichain norm {antichain_norm}")));
    }
    Ok(Certificate::Variation { measure: m.clone(), variation, antichain_norm })
}

pub const SEARCH_MAX_HORIZON: u64 = 1 << 20;

/// Search space shared by the Pták and Mazur searches: exponent range for the
/// dyadic intervals `[2^a, 2^b)`, `a_min ≤ a < b ≤ top`.
struct Space {
    a_min: u32,
    top: u32,
    warnings: Vec<String>,
}

fn search_space(mu: &WeightSeq, eps: &Rational, horizon: u64) -> Result<Space> {
    if !mu.diverges() {
        return Err(Error::Precondition("the weight sequence has a finite sum".into()));
    }
    if !(2..=SEARCH_MAX_HORIZON).contains(&horizon) {
        return Err(Error::InvalidArgument(format!("horizon must lie in [2, {SEARCH_MAX_HORIZON}]")));
    }
    let top = block_of(horizon);
    let heavy = (1..1u64 << top).rev().find(|&k| mu.weight(k) > *eps);
    let mut warnings = Vec::new();
    let a_min = match heavy {
        None => 0,
        Some(k) if block_of(k) + 1 < top => block_of(k) + 1,
        Some(_) => {
            warnings.push("weights above epsilon reach the last block; searching from index 1".into());
            0
        }
    };
    Ok(Space { a_min, top, warnings })
}

fn describe(space: &Space, greedy: bool) -> String {
    let mut s = format!("dyadic intervals [2^a, 2^b) with {} <= a < b <= {}", space.a_min, space.top);
    if greedy {
        s.push_str(", then greedy unions of blocks");
    }
    for w in &space.warnings {
        s.push_str("; warning: ");
        s.push_str(w);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING-KEBAB-CASE")]
#[allow(clippy::large_enum_variant)]
pub enum PtakOutcome {
    Found {
        certificate: Certificate,
    },
    FilledUpToHorizon {
        searched: String,
        #[serde(with = "rational::serde_str")]
        best_ratio: Rational,
    },
}

/// Looks for `E` with `φ_{F,μ}(E) < ε μ(E)`, i.e. a set that the family does
/// not `ε`-fill.
pub fn ptak_fill_search(f: &Family, mu: &WeightSeq, eps: &Rational, horizon: u64) -> Result<PtakOutcome> {
    let space = search_space(mu, eps, horizon)?;
    let spec = SubmeasureSpec::new(f.clone(), mu.clone());
    let eval = |e: &Intervals| {
        let s = e.to_set();
        (phi(&spec, &s), mu.mass(&s))
    };
    let found = |e: Intervals, p: Rational, m: Rational, greedy: bool| PtakOutcome::Found {
        certificate: Certificate::PtakFill {
            family: f.clone(),
            weights: mu.clone(),
            epsilon: eps.clone(),
            set: e,
            phi: p,
            mass: m,
            searched: describe(&space, greedy),
        },
    };
    let mut best: Option<(Rational, Intervals)> = None;
    for b in (1..=space.top).rev() {
        for a in space.a_min..b {
            let e = Intervals::dyadic(a, b);
            let (p, m) = eval(&e);
            if p < eps * &m {
                return Ok(found(e, p, m, false));
            }
            let r = p / m;
            if best.as_ref().is_none_or(|(br, _)| r < *br) {
                best = Some((r, e));
            }
        }
    }
    let Some((mut ratio, mut e)) = best else {
        return Ok(PtakOutcome::FilledUpToHorizon { searched: describe(&space, true), best_ratio: Rational::zero() });
    };
    for n in space.a_min..space.top {
        let (lo, hi) = (1u64 << n, 1u64 << (n + 1));
        if e.covers(lo, hi) {
            continue;
        }
        let cand = e.with(lo, hi);
        let (p, m) = eval(&cand);
        if p < eps * &m {
            return Ok(found(cand, p, m, true));
        }
        let r = p / m;
        if r < ratio {
            ratio = r;
            e = cand;
        }
    }
    Ok(PtakOutcome::FilledUpToHorizon { searched: describe(&space, true), best_ratio: ratio })
}

/// `Φ_F(Σ_{i∈G} (μ_i/μ(G)) x_i)` with `x_i = e_i`, or the `i`-th block
/// (counting from 1) when blocks are given.
pub fn mazur_value(f: &Family, mu: &WeightSeq, blocks: Option<&BlockSequence>, g: &FiniteSet) -> Rational {
    let total = mu.mass(g);
    if total.is_zero() {
        return Rational::zero();
    }
    let y = match blocks {
        None => mu.on(g),
        Some(bs) => g
            .iter()
            .filter_map(|i| bs.blocks().get(i as usize - 1).map(|x| x.scale(&mu.weight(i))))
            .fold(FinVec::zero(), |acc, x| acc.add(&x)),
    };
    ext_norm(f, &y) / total
}

/// Minimises the Mazur value over the search space; ties keep the earliest
/// candidate (larger `b` first, then smaller `a`).
pub fn mazur_combination_search(
    f: &Family,
    blocks: Option<&BlockSequence>,
    mu: &WeightSeq,
    eps: &Rational,
    horizon: u64,
) -> Result<Certificate> {
    let horizon = match blocks {
        Some(bs) => horizon.min(bs.blocks().len() as u64 + 1),
        None => horizon,
    };
    let space = search_space(mu, eps, horizon)?;
    let mut best: Option<(Rational, Intervals)> = None;
    for b in (1..=space.top).rev() {
        for a in space.a_min..b {
            let e = Intervals::dyadic(a, b);
            let v = mazur_value(f, mu, blocks, &e.to_set());
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, e));
            }
        }
    }
    let (mut value, mut set) = best.ok_or_else(|| Error::Precondition("empty search space".into()))?;
    for n in space.a_min..space.top {
        let (lo, hi) = (1u64 << n, 1u64 << (n + 1));
        if set.covers(lo, hi) {
            continue;
        }
        let cand = set.with(lo, hi);
        let v = mazur_value(f, mu, blocks, &cand.to_set());
        if v < value {
            value = v;
            set = cand;
        }
    }
    Ok(Certificate::Mazur {
        family: f.clone(),
        weights: mu.clone(),
        blocks: blocks.cloned(),
        epsilon: eps.clone(),
        below_epsilon: value < *eps,
        set,
        value,
        searched: describe(&space, true),
    })
}

/// Window norms `Φ(P_{[1,2^j)} σ)` and tail lower bounds `φ(A ∩ [2^j, horizon))`
/// for `σ = τ χ_A`. Norms count as diverging when the last one is at least
/// twice the one at half the exponent; bounded norms with a positive tail
/// floor are evidence for `σ ∈ FIN \ EXH`.
pub fn exh_vs_fin_probe(f: &Family, tau: &WeightSeq, g: &SetGenerator, horizon: u64) -> Result<Certificate> {
    if !(4..=SEARCH_MAX_HORIZON).contains(&horizon) {
        return Err(Error::InvalidArgument(format!("horizon must lie in [4, {SEARCH_MAX_HORIZON}]")));
    }
    let spec = SubmeasureSpec::new(f.clone(), tau.clone());
    let top = block_of(horizon);
    let a = g.realize(1 << top);
    let window_norms: Vec<Sample> =
        (1..=top).map(|j| Sample { at: 1 << j, value: phi(&spec, &a.window(1, 1 << j)) }).collect();
    let tails: Vec<Sample> =
        (0..top).map(|j| Sample { at: 1 << j, value: phi(&spec, &a.window(1 << j, 1 << top)) }).collect();
    let last = &window_norms[top as usize - 1].value;
    let half = &window_norms[(top / 2) as usize - 1].value;
    let norms = if last.is_positive() && *last >= half * Rational::from_integer(2.into()) {
        NormTrend::DivergingNorms
    } else {
        NormTrend::BoundedNorms
    };
    let tail_floor = tails.iter().map(|t| t.value.clone()).min().unwrap_or_else(Rational::zero);
    let evidence = match norms {
        NormTrend::DivergingNorms => "sigma not in FIN".to_string(),
        NormTrend::BoundedNorms if tail_floor.is_positive() => format!(
            "TAIL-ABOVE({}): sigma in FIN \\ EXH, so FIN and EXH differ for this family",
            rational::format(&tail_floor)
        ),
        NormTrend::BoundedNorms => "tails reach 0 inside the horizon: consistent with EXH".to_string(),
    };
    Ok(Certificate::ExhFin {
        family: f.clone(),
        weights: tau.clone(),
        generator: g.clone(),
        horizon,
        window_norms,
        tails,
        norms,
        tail_floor,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::CapRule;
    use crate::ordinal::Ordinal;
    use crate::rational::ratio;
    use crate::setgen::PrefixRule;

    fn s1() -> Family {
        Family::schreier(Ordinal::finite(1))
    }

    fn vec_of(pairs: &[(u64, i64, i64)]) -> FinVec {
        FinVec::from_pairs(pairs.iter().map(|&(k, p, q)| (k, ratio(p, q)))).unwrap()
    }

    #[test]
    fn l1_copies() {
        let a = vec_of(&[(1, 1, 2), (4, -3, 1), (9, 1, 7)]);
        let c = l1_copy_check(&Family::AllFinite {}, &SetGenerator::AllIndices {}, 16, &[a]).unwrap();
        c.verify().unwrap();
        let one = SetGenerator::block_prefix(PrefixRule::One);
        let b = vec_of(&[(1, 1, 1), (2, -1, 3), (8, 5, 2), (32, 1, 9)]);
        l1_copy_check(&Family::farah(), &one, 64, &[b]).unwrap().verify().unwrap();
        assert!(matches!(l1_copy_check(&s1(), &SetGenerator::AllIndices {}, 10, &[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn c0_branches() {
        let p = BitString::parse("01").unwrap();
        let c = c0_branch_check(&p, 8, &[vec![ratio(1, 1); 8]]).unwrap();
        match &c {
            Certificate::C0Branch { checks, .. } => assert_eq!(checks[0].norm, ratio(1, 1)),
            _ => unreachable!(),
        }
        let c = c0_branch_check(&p, 3, &[vec![ratio(1, 1), ratio(-1, 2), ratio(1, 4)]]).unwrap();
        c.verify().unwrap();
        let c = c0_branch_check(&p, 1, &[vec![ratio(-3, 5)]]).unwrap();
        match c {
            Certificate::C0Branch { checks, .. } => assert_eq!(checks[0].norm, ratio(3, 5)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn schur_examples() {
        let blocks: Vec<FinVec> = (1..6u32)
            .map(|k| {
                let c = CapRule::Farah.cap(k);
                let lo = 1u64 << k;
                FinVec::weighted_indicator(&FiniteSet::interval(lo, lo + c), |_| ratio(1, c as i64))
            })
            .collect();
        for b in &blocks {
            assert_eq!(ext_norm(&Family::farah(), b), ratio(1, 1));
        }
        let xs = BlockSequence::new(blocks).unwrap();
        let g = SetGenerator::block_prefix(PrefixRule::Farah);
        let c = schur_witness(&Family::farah(), &xs, &ratio(1, 2), &g, 64).unwrap().unwrap();
        c.verify().unwrap();
        match &c {
            Certificate::Schur { values, set_in_family, .. } => {
                assert!(values.iter().all(|v| *v == ratio(1, 1)));
                assert!(set_in_family);
            }
            _ => unreachable!(),
        }
        let mixed =
            BlockSequence::new(vec![vec_of(&[(1, 1, 2), (2, -1, 1)]), vec_of(&[(3, 1, 1), (5, 1, 1)])]).unwrap();
        let c = schur_witness(&Family::AllFinite {}, &mixed, &ratio(1, 1), &SetGenerator::AllIndices {}, 8)
            .unwrap()
            .unwrap();
        c.verify().unwrap();
        let singles = BlockSequence::new((1..5).map(|k| vec_of(&[(k, 1, 1)])).collect()).unwrap();
        let r = schur_witness(&Family::Singletons {}, &singles, &ratio(3, 1), &SetGenerator::AllIndices {}, 8).unwrap();
        assert!(r.is_none());
        assert!(matches!(
            schur_witness(&Family::Singletons {}, &mixed, &ratio(1, 2), &SetGenerator::AllIndices {}, 8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn variation_examples() {
        let m = DyadicMeasure::new(1, vec![ratio(1, 1), ratio(-1, 1)]).unwrap();
        assert_eq!(variation_norm(&m), ratio(2, 1));
        assert_eq!(variation_by_partitions(&m).unwrap(), ratio(2, 1));
        variation_identity_check(&m).unwrap().verify().unwrap();
        let pos = DyadicMeasure::new(2, vec![ratio(1, 4), ratio(0, 1), ratio(3, 4), ratio(1, 2)]).unwrap();
        assert_eq!(variation_norm(&pos), pos.cylinder(1));
        assert_eq!(m.node_vector().get(tree_code(&BitString::parse("1").unwrap()).unwrap()), ratio(-1, 1));
        assert!(DyadicMeasure::new(2, vec![ratio(1, 1)]).is_err());
    }

    #[test]
    fn ptak_examples() {
        match ptak_fill_search(&s1(), &WeightSeq::Lambda, &ratio(1, 4), 1 << 10).unwrap() {
            PtakOutcome::Found { certificate } => {
                certificate.verify().unwrap();
                match &certificate {
                    Certificate::PtakFill { set, phi, mass, .. } => {
                        assert_eq!(set.0, vec![(4, 1024)]);
                        assert_eq!(*mass, ratio(8, 1));
                        assert!(*phi <= ratio(3, 2));
                    }
                    _ => unreachable!(),
                }
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ptak_fill_search(&Family::AllFinite {}, &WeightSeq::Lambda, &ratio(1, 2), 1 << 8).unwrap(),
            PtakOutcome::FilledUpToHorizon { .. }
        ));
        assert!(matches!(
            ptak_fill_search(&Family::Singletons {}, &WeightSeq::Lambda, &ratio(1, 2), 1 << 6).unwrap(),
            PtakOutcome::Found { .. }
        ));
        assert!(matches!(
            ptak_fill_search(&s1(), &WeightSeq::Geometric, &ratio(1, 2), 64),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn mazur_examples() {
        let c = mazur_combination_search(&s1(), None, &WeightSeq::Lambda, &ratio(1, 4), 1 << 10).unwrap();
        c.verify().unwrap();
        match &c {
            Certificate::Mazur { value, below_epsilon, .. } => {
                assert!(*below_epsilon);
                assert!(*value <= ratio(3, 16));
            }
            _ => unreachable!(),
        }
        let c = mazur_combination_search(&Family::Singletons {}, None, &WeightSeq::One, &ratio(1, 10), 64).unwrap();
        match &c {
            Certificate::Mazur { value, below_epsilon, .. } => {
                assert!(*below_epsilon);
                assert_eq!(*value, ratio(1, 63));
            }
            _ => unreachable!(),
        }
        let c = mazur_combination_search(&Family::AllFinite {}, None, &WeightSeq::Lambda, &ratio(1, 2), 256).unwrap();
        match &c {
            Certificate::Mazur { value, below_epsilon, .. } => {
                assert!(!below_epsilon);
                assert_eq!(*value, ratio(1, 1));
            }
            _ => unreachable!(),
        }
        let blocks = BlockSequence::new((1..=8).map(|k| vec_of(&[(k, 1, 1)])).collect()).unwrap();
        let c =
            mazur_combination_search(&Family::Singletons {}, Some(&blocks), &WeightSeq::One, &ratio(1, 2), 64).unwrap();
        c.verify().unwrap();
    }

    #[test]
    fn mazur_monotone_in_length() {
        for a in 1..4u32 {
            let mut prev: Option<Rational> = None;
            for b in a + 1..=10 {
                let v = mazur_value(&s1(), &WeightSeq::Lambda, None, &Intervals::dyadic(a, b).to_set());
                if let Some(p) = &prev {
                    assert!(v <= *p, "a={a} b={b}");
                }
                prev = Some(v);
            }
        }
    }

    #[test]
    fn exh_fin_examples() {
        let c =
            exh_vs_fin_probe(&Family::Singletons {}, &WeightSeq::One, &SetGenerator::AllIndices {}, 1 << 8).unwrap();
        c.verify().unwrap();
        match &c {
            Certificate::ExhFin { norms, tail_floor, .. } => {
                assert_eq!(*norms, NormTrend::BoundedNorms);
                assert_eq!(*tail_floor, ratio(1, 1));
            }
            _ => unreachable!(),
        }
        let c =
            exh_vs_fin_probe(&Family::AllFinite {}, &WeightSeq::Lambda, &SetGenerator::AllIndices {}, 1 << 10).unwrap();
        match &c {
            Certificate::ExhFin { norms, window_norms, .. } => {
                assert_eq!(*norms, NormTrend::DivergingNorms);
                assert_eq!(window_norms.last().unwrap().value, ratio(10, 1));
            }
            _ => unreachable!(),
        }
        let c = exh_vs_fin_probe(&s1(), &WeightSeq::Lambda, &SetGenerator::AllIndices {}, 1 << 10).unwrap();
        match &c {
            Certificate::ExhFin { norms, window_norms, tail_floor, .. } => {
                assert_eq!(*norms, NormTrend::BoundedNorms);
                assert!(window_norms.iter().all(|w| w.value <= ratio(3, 2)));
                assert!(*tail_floor >= ratio(1, 1));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn block_sequence_rejects_overlap() {
        assert!(BlockSequence::new(vec![vec_of(&[(3, 1, 1)]), vec_of(&[(2, 1, 1)])]).is_err());
        let bs: std::result::Result<BlockSequence, _> = serde_json::from_str(r#"[{"1":"1"},{"1":"2"}]"#);
        assert!(bs.is_err());
    }
}
