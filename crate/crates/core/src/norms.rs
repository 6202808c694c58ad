//! The extended norm `Φ_F(x) = max{Σ_{i∈F} |x_i| : F ∈ F}` on finitely
//! supported rational vectors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{Family, Tester};
use crate::finset::{block_of, FiniteSet};
use crate::rational::{self, Rational};
use crate::schreier::schreier_norm;

/// A finitely supported vector indexed by positive integers. Zero entries are
/// never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FinVec(BTreeMap<u64, Rational>);

impl FinVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, Rational)>>(pairs: I) -> Result<Self> {
        let mut v = FinVec::zero();
        for (k, q) in pairs {
            if k == 0 {
                return Err(Error::InvalidArgument("vector indices start at 1".into()));
            }
            v.set(k, q);
        }
        Ok(v)
    }

    /// `Σ_{k∈A} c_k e_k` for a weight function `c`.
    pub fn weighted_indicator(set: &FiniteSet, weight: impl Fn(u64) -> Rational) -> Self {
        let mut v = FinVec::zero();
        for k in set.iter() {
            v.set(k, weight(k));
        }
        v
    }

    pub fn set(&mut self, k: u64, q: Rational) {
        debug_assert!(k >= 1);
        if q.is_zero() {
            self.0.remove(&k);
        } else {
            self.0.insert(k, q);
        }
    }

    pub fn get(&self, k: u64) -> Rational {
        self.0.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> FiniteSet {
        FiniteSet::from_sorted(self.0.keys().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> + '_ {
        self.0.iter().map(|(&k, q)| (k, q))
    }

    pub fn abs(&self) -> FinVec {
        FinVec(self.0.iter().map(|(&k, q)| (k, q.abs())).collect())
    }

    pub fn scale(&self, c: &Rational) -> FinVec {
        let mut v = FinVec::zero();
        for (k, q) in self.iter() {
            v.set(k, q * c);
        }
        v
    }

    pub fn add(&self, other: &FinVec) -> FinVec {
        let mut v = self.clone();
        for (k, q) in other.iter() {
            v.set(k, v.get(k) + q);
        }
        v
    }

    pub fn l1(&self) -> Rational {
        self.0.values().fold(Rational::zero(), |a, q| a + q.abs())
    }

    pub fn max_abs(&self) -> Rational {
        self.0.values().map(|q| q.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for FinVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(k, q)| (k, q.to_string()))).finish()
    }
}

impl Serialize for FinVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, q) in &self.0 {
            map.serialize_entry(&k.to_string(), &rational::format(q))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for FinVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = FinVec;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from positive indices to rationals")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<FinVec, A::Error> {
                let mut v = FinVec::zero();
                while let Some((k, q)) = m.next_entry::<String, String>()? {
                    let idx: u64 = k.trim().parse().map_err(|_| de::Error::custom(format!("bad index {k:?}")))?;
                    if idx == 0 {
                        return Err(de::Error::custom("vector indices start at 1"));
                    }
                    if v.0.contains_key(&idx) {
                        return Err(de::Error::custom(format!("duplicate index {idx}")));
                    }
                    v.set(idx, rational::parse(&q).map_err(de::Error::custom)?);
                }
                Ok(v)
            }
        }
        d.deserialize_map(V)
    }
}

/// `P_A x`.
pub fn project(x: &FinVec, set: &FiniteSet) -> FinVec {
    FinVec(x.0.iter().filter(|(k, _)| set.contains(**k)).map(|(&k, q)| (k, q.clone())).collect())
}

/// `P_{[n,∞)} x`.
pub fn project_tail(x: &FinVec, n: u64) -> FinVec {
    FinVec(x.0.range(n..).map(|(&k, q)| (k, q.clone())).collect())
}

pub fn ext_norm(f: &Family, x: &FinVec) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    match f {
        Family::AllFinite {} => x.l1(),
        Family::Singletons {} => x.max_abs(),
        Family::PartitionBlocks {} => block_sums(x, |_| usize::MAX).into_iter().max().unwrap_or_else(Rational::zero),
        Family::BlockCappedLocal { cap } => {
            block_sums(x, |b| cap.cap(b) as usize).into_iter().max().unwrap_or_else(Rational::zero)
        }
        Family::BlockCappedJoined { cap } => rational::sum(&block_sums(x, |b| cap.cap(b) as usize)),
        Family::Antichains {} => antichain_norm(x),
        Family::Explicit { members } => members
            .iter()
            .map(|m| m.iter().map(|k| x.get(k).abs()).fold(Rational::zero(), |a, b| a + b))
            .max()
            .unwrap_or_else(Rational::zero),
        Family::Restrict { base, window } => ext_norm(base, &project(x, window)),
        Family::Schreier { alpha } => {
            let support: Vec<u64> = x.0.keys().copied().collect();
            let (scale, nums) = common_scale(x);
            match nums.iter().map(|n| n.to_i128()).collect::<Option<Vec<i128>>>() {
                Some(small) if fits(&small) => {
                    let v = schreier_norm(alpha, &support, &small);
                    Rational::new(BigInt::from(v), scale)
                }
                _ => Rational::new(schreier_norm(alpha, &support, &nums), scale),
            }
        }
    }
}

/// Whether every partial sum stays far from `i128` overflow.
fn fits(nums: &[i128]) -> bool {
    let total = nums.iter().try_fold(0i128, |acc, &n| acc.checked_add(n));
    matches!(total, Some(t) if t < i128::MAX / 2)
}

/// Integer numerators of `|x_i|` over their least common denominator.
fn common_scale(x: &FinVec) -> (BigInt, Vec<BigInt>) {
    let l = x.0.values().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let nums = x.0.values().map(|q| (q.numer() * (&l / q.denom())).abs()).collect();
    (l, nums)
}

/// For each block, the sum of its `cap(block)` largest absolute entries.
fn block_sums(x: &FinVec, cap: impl Fn(u32) -> usize) -> Vec<Rational> {
    let mut blocks: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
    for (k, q) in x.iter() {
        blocks.entry(block_of(k)).or_default().push(q.abs());
    }
    blocks
        .into_iter()
        .map(|(b, mut v)| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v.truncate(cap(b));
            rational::sum(&v)
        })
        .collect()
}

/// `best(t) = max(|x_t|, Σ_children best)`, evaluated bottom-up over the
/// ancestors of the support.
fn antichain_norm(x: &FinVec) -> Rational {
    let mut pending: BTreeMap<u64, (Rational, Rational)> = BTreeMap::new();
    for (k, q) in x.iter() {
        pending.insert(k, (q.abs(), Rational::zero()));
    }
    loop {
        let (code, (own, below)) = pending.pop_last().expect("nonempty");
        let best = if own > below { own } else { below };
        if code == 1 {
            return best;
        }
        let parent = pending.entry(code >> 1).or_insert_with(|| (Rational::zero(), Rational::zero()));
        parent.1 += best;
    }
}

/// `Φ_F(P_{[n,∞)} x)`.
pub fn tail_norm(f: &Family, x: &FinVec, n: u64) -> Rational {
    ext_norm(f, &project_tail(x, n))
}

pub const ORACLE_MAX_SUPPORT: usize = 20;

/// Brute force over the members contained in `supp(x)`, using only family
/// membership. Independent of the optimizers in [`ext_norm`].
pub fn norm_oracle(f: &Family, x: &FinVec) -> Result<Rational> {
    if x.len() > ORACLE_MAX_SUPPORT {
        return Err(Error::InvalidArgument(format!("oracle support limited to {ORACLE_MAX_SUPPORT} indices")));
    }
    let support: Vec<(u64, Rational)> = x.iter().map(|(k, q)| (k, q.abs())).collect();
    let mut tester = Tester::new(f);
    let mut best = Rational::zero();
    let mut chosen = Vec::new();
    let mut memo = HashMap::new();
    oracle_dfs(&support, 0, &mut chosen, Rational::zero(), &mut tester, &mut best, &mut memo);
    Ok(best)
}

fn oracle_dfs(
    support: &[(u64, Rational)],
    from: usize,
    chosen: &mut Vec<u64>,
    mass: Rational,
    tester: &mut Tester<'_>,
    best: &mut Rational,
    memo: &mut HashMap<Vec<u64>, bool>,
) {
    if mass > *best {
        *best = mass.clone();
    }
    for i in from..support.len() {
        chosen.push(support[i].0);
        let ok = *memo.entry(chosen.clone()).or_insert_with(|| tester.contains(chosen));
        if ok {
            oracle_dfs(support, i + 1, chosen, mass.clone() + &support[i].1, tester, best, memo);
        }
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::CapRule;
    use crate::ordinal::Ordinal;
    use crate::rational::ratio;

    fn vec_of(pairs: &[(u64, i64, i64)]) -> FinVec {
        FinVec::from_pairs(pairs.iter().map(|&(k, p, q)| (k, ratio(p, q)))).unwrap()
    }

    fn schreier(s: &str) -> Family {
        Family::schreier(Ordinal::parse(s).unwrap())
    }

    #[test]
    fn examples() {
        let x = vec_of(&[(1, 1, 2), (3, -3, 4)]);
        assert_eq!(ext_norm(&Family::AllFinite {}, &x), ratio(5, 4));
        assert_eq!(ext_norm(&Family::Singletons {}, &x), ratio(3, 4));
        let ind = vec_of(&[(4, 1, 1), (5, 1, 1), (6, 1, 1), (7, 1, 1)]);
        assert_eq!(ext_norm(&schreier("1"), &ind), ratio(4, 1));
        let t = vec_of(&[(1, 1, 1), (2, 3, 4), (3, 1, 2)]);
        assert_eq!(ext_norm(&Family::Antichains {}, &t), ratio(5, 4));
        for (f, v) in [
            (Family::AllFinite {}, &x),
            (Family::Singletons {}, &x),
            (schreier("1"), &ind),
            (Family::Antichains {}, &t),
        ] {
            assert_eq!(norm_oracle(&f, v).unwrap(), ext_norm(&f, v));
        }
    }

    #[test]
    fn tails_and_projection() {
        let x = vec_of(&[(1, 1, 1), (5, 1, 1)]);
        assert_eq!(tail_norm(&Family::AllFinite {}, &x, 2), ratio(1, 1));
        let lam = |lo: u64, hi: u64| {
            FinVec::weighted_indicator(&FiniteSet::interval(lo, hi), |k| rational::pow2_neg(block_of(k)))
        };
        assert_eq!(tail_norm(&schreier("1"), &lam(4, 8), 8), ratio(0, 1));
        assert_eq!(tail_norm(&schreier("1"), &lam(4, 16), 8), ratio(1, 1));
        let y = vec_of(&[(1, 1, 1), (2, 2, 1)]);
        assert_eq!(project(&y, &crate::set![1]), vec_of(&[(1, 1, 1)]));
        assert_eq!(project(&y, &y.support()), y);
        assert!(project(&y, &crate::set![]).is_zero());
    }

    #[test]
    fn block_families() {
        let x = vec_of(&[(2, 1, 1), (3, 1, 1), (4, 1, 2), (5, 1, 2), (6, 1, 2), (7, 1, 2), (8, 3, 1)]);
        assert_eq!(ext_norm(&Family::PartitionBlocks {}, &x), ratio(3, 1));
        let local = Family::BlockCappedLocal { cap: CapRule::One };
        assert_eq!(ext_norm(&local, &x), ratio(3, 1));
        assert_eq!(ext_norm(&Family::farah(), &x), ratio(2 + 1 + 3, 1));
        for f in [Family::PartitionBlocks {}, local, Family::farah()] {
            assert_eq!(norm_oracle(&f, &x).unwrap(), ext_norm(&f, &x));
        }
    }

    #[test]
    fn big_numerators_fall_back_to_bigint() {
        let big = Rational::new(BigInt::one() << 200u32, BigInt::from(3));
        let x = FinVec::from_pairs([(3, big.clone()), (4, big.clone()), (9, big.clone())]).unwrap();
        let f = schreier("1");
        assert_eq!(ext_norm(&f, &x), norm_oracle(&f, &x).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let x: FinVec = serde_json::from_str(r#"{"4":"1/4","5":"-2/8","6":"0"}"#).unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"4":"1/4","5":"-1/4"}"#);
        assert!(serde_json::from_str::<FinVec>(r#"{"0":"1"}"#).is_err());
    }
}
