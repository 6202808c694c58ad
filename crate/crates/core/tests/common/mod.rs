#![allow(dead_code)]

use std::ops::Range;

use combinach::families::CapRule;
use combinach::rational::ratio;
use combinach::{Family, FinVec, FiniteSet, Ordinal, Rational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).unwrap()
}

pub fn schreier(s: &str) -> Family {
    Family::schreier(o(s))
}

/// One representative of every catalog kind.
pub fn catalog() -> Vec<Family> {
    vec![
        Family::Singletons {},
        Family::AllFinite {},
        Family::PartitionBlocks {},
        Family::farah(),
        Family::BlockCappedJoined { cap: CapRule::One },
        Family::BlockCappedLocal { cap: CapRule::Farah },
        Family::Antichains {},
        schreier("1"),
        schreier("2"),
        schreier("w"),
    ]
}

pub fn subset_of(mask: u32, n: u64) -> FiniteSet {
    FiniteSet::new((1..n).filter(|&k| mask >> (k - 1) & 1 == 1).collect()).unwrap()
}

/// Each index kept with a probability drawn once from `density`.
pub fn random_set<R: Rng>(r: &mut R, lo: u64, hi: u64, density: Range<f64>) -> FiniteSet {
    let p = r.gen_range(density);
    FiniteSet::new((lo..hi).filter(|_| r.gen_bool(p)).collect()).unwrap()
}

/// Entries drawn from `±{1, 1/2, 1/4}` on a random subset of `[1, hi)`.
pub fn dyadic_vec<R: Rng>(r: &mut R, hi: u64, density: Range<f64>) -> FinVec {
    let p = r.gen_range(density);
    let choices = [ratio(1, 1), ratio(1, 2), ratio(1, 4)];
    let support: Vec<u64> = (1..hi).filter(|_| r.gen_bool(p)).collect();
    FinVec::from_pairs(support.into_iter().map(|k| {
        let q = choices[r.gen_range(0..3)].clone();
        (k, if r.gen_bool(0.5) { -q } else { q })
    }))
    .unwrap()
}

/// Entries `p/q` with `|p| ≤ 9`, `1 ≤ q ≤ 8` on at most `max_len` indices of `[1, hi)`.
pub fn rational_vec<R: Rng>(r: &mut R, hi: u64, max_len: usize) -> FinVec {
    let len = r.gen_range(0..=max_len);
    FinVec::from_pairs((0..len).map(|_| (r.gen_range(1..hi), ratio(r.gen_range(-9..=9), r.gen_range(1..=8))))).unwrap()
}

pub fn q(p: i64, d: i64) -> Rational {
    ratio(p, d)
}
