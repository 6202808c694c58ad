//! The acceptance suite behind `selftest`. Every check is seeded, so the
//! report is identical from run to run.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use combinach::diagnostics::{
    c0_branch_check, l1_copy_check, mazur_combination_search, ptak_fill_search, variation_identity_check, Certificate,
    DyadicMeasure, PtakOutcome,
};
use combinach::families::{family_contains, spreading_check, CapRule};
use combinach::finset::block_of;
use combinach::norms::{ext_norm, norm_oracle};
use combinach::rational::{self, ratio, Rational};
use combinach::schreier::{
    density_bound_check, schreier_contains, summable_like_witness, trace_vs_i2_witness, Membership,
};
use combinach::submeasures::{phi, tail_profile, SubmeasureSpec, WeightSeq};
use combinach::{BitString, Family, FinVec, FiniteSet, Ordinal, PrefixRule, Result, SetGenerator};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    check: fn() -> Check,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    pub fn run(&self) -> Check {
        (self.check)()
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, check| Criterion { id, title, check };
    vec![
        c(1, "closed-form norm identities", closed_forms as fn() -> Check),
        c(2, "oracle equivalence", oracle_equivalence),
        c(3, "S1 law", first_schreier_law),
        c(4, "hereditary and spreading Schreier families", hereditary_spreading),
        c(5, "witness values", witness_values),
        c(6, "density bound", density_bound),
        c(7, "variation identity", variation_identity),
        c(8, "l1 and c0 witnesses", l1_c0),
        c(9, "Ptak and Mazur searches", ptak_mazur),
        c(10, "submeasure axioms", submeasure_axioms),
        c(11, "tail-profile monotonicity", tail_monotonicity),
        c(12, "determinism", determinism),
    ]
}

pub fn run_all() -> Vec<(Criterion, Check)> {
    criteria()
        .into_iter()
        .map(|c| {
            let r = c.run();
            (c, r)
        })
        .collect()
}

pub fn line(c: &Criterion, r: &Check) -> String {
    format!("{} {:>2} {}: {}", if r.passed { "PASS" } else { "FAIL" }, c.id, c.title, r.detail)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).expect("built-in ordinal")
}

/// Passes when nothing failed; otherwise reports the first failure.
fn tally(failures: Vec<String>, checked: usize, what: &str) -> Check {
    match failures.first() {
        None => Check { passed: true, detail: format!("{checked} {what}, no exceptions") },
        Some(first) => {
            Check { passed: false, detail: format!("{} of {checked} {what} failed, first: {first}", failures.len()) }
        }
    }
}

fn within(mut c: Check, start: Instant, limit: Duration) -> Check {
    if start.elapsed() > limit {
        c.passed = false;
        c.detail = format!("{}; over the {} s budget", c.detail, limit.as_secs());
    }
    c
}

fn error(e: combinach::Error) -> Check {
    Check { passed: false, detail: format!("error: {e}") }
}

fn catalog() -> Vec<Family> {
    vec![
        Family::Singletons {},
        Family::AllFinite {},
        Family::PartitionBlocks {},
        Family::farah(),
        Family::BlockCappedJoined { cap: CapRule::One },
        Family::BlockCappedLocal { cap: CapRule::Farah },
        Family::Antichains {},
        Family::schreier(o("1")),
        Family::schreier(o("2")),
        Family::schreier(o("w")),
    ]
}

fn catalog_specs() -> Vec<SubmeasureSpec> {
    let taus = [WeightSeq::Lambda, WeightSeq::Harmonic, WeightSeq::One, WeightSeq::Geometric, WeightSeq::FarahBlock];
    catalog().into_iter().flat_map(|f| taus.iter().map(move |t| SubmeasureSpec::new(f.clone(), t.clone()))).collect()
}

fn rational_vec(r: &mut ChaCha8Rng, hi: u64, max_len: usize) -> FinVec {
    let len = r.gen_range(0..=max_len);
    let pairs: Vec<(u64, Rational)> =
        (0..len).map(|_| (r.gen_range(1..hi), ratio(r.gen_range(-9..=9), r.gen_range(1..=8)))).collect();
    FinVec::from_pairs(pairs).expect("positive indices")
}

fn dyadic_vec(r: &mut ChaCha8Rng, hi: u64) -> FinVec {
    let p = r.gen_range(0.2..0.9);
    let support: Vec<u64> = (1..hi).filter(|_| r.gen_bool(p)).collect();
    let pairs: Vec<(u64, Rational)> =
        support.into_iter().map(|k| (k, ratio(if r.gen_bool(0.5) { 1 } else { -1 }, 1 << r.gen_range(0..3)))).collect();
    FinVec::from_pairs(pairs).expect("positive indices")
}

fn random_set(r: &mut ChaCha8Rng, hi: u64) -> FiniteSet {
    let p = r.gen_range(0.02..0.5);
    FiniteSet::new((1..hi).filter(|_| r.gen_bool(p)).collect()).expect("positive elements")
}

fn subset_of(mask: u32, n: u64) -> FiniteSet {
    FiniteSet::new((1..=n).filter(|&k| mask >> (k - 1) & 1 == 1).collect()).expect("positive elements")
}

fn closed_forms() -> Check {
    let start = Instant::now();
    let mut r = rng(1);
    let mut bad = Vec::new();
    for i in 0..200 {
        let x = rational_vec(&mut r, 64, 32);
        let mut blocks: BTreeMap<u32, Rational> = BTreeMap::new();
        for (k, v) in x.iter() {
            *blocks.entry(block_of(k)).or_insert_with(Rational::zero) += v.abs();
        }
        let block_max = blocks.into_values().max().unwrap_or_else(Rational::zero);
        let l1: Rational = x.iter().map(|(_, v)| v.abs()).sum();
        let sup = x.iter().map(|(_, v)| v.abs()).max().unwrap_or_else(Rational::zero);
        if ext_norm(&Family::AllFinite {}, &x) != l1 {
            bad.push(format!("vector {i}, all-finite"));
        }
        if ext_norm(&Family::Singletons {}, &x) != sup {
            bad.push(format!("vector {i}, singletons"));
        }
        if ext_norm(&Family::PartitionBlocks {}, &x) != block_max {
            bad.push(format!("vector {i}, partition-blocks"));
        }
    }
    within(tally(bad, 600, "identities"), start, Duration::from_secs(2))
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut families: Vec<Family> =
        ["1", "2", "3", "w", "w+1", "w*2", "w^2"].iter().map(|a| Family::schreier(o(a))).collect();
    families.push(Family::Antichains {});
    families.push(Family::farah());
    let mut r = rng(2);
    let mut bad = Vec::new();
    for f in &families {
        for i in 0..300 {
            let x = dyadic_vec(&mut r, 16);
            match norm_oracle(f, &x) {
                Ok(v) if v == ext_norm(f, &x) => {}
                Ok(v) => bad.push(format!("{} vector {i}: oracle {v}", family_name(f))),
                Err(e) => return error(e),
            }
        }
    }
    within(tally(bad, 300 * families.len(), "vectors"), start, Duration::from_secs(60))
}

fn family_name(f: &Family) -> String {
    serde_json::to_string(f).expect("families serialize")
}

fn first_schreier_law() -> Check {
    let one = Ordinal::finite(1);
    let mut recursive = Membership::recursive_only();
    let mut bad = Vec::new();
    for mask in 0u32..(1 << 12) {
        let f = subset_of(mask, 12);
        let law = f.first().is_none_or(|m| f.len() as u64 <= m);
        let fast = schreier_contains(&one, &f).unwrap_or(!law);
        if fast != law || recursive.contains(&one, f.elements()) != law {
            bad.push(format!("{f}"));
        }
    }
    tally(bad, 1 << 12, "subsets of [1,12]")
}

fn hereditary_spreading() -> Check {
    let mut bad = Vec::new();
    let alphas = ["1", "2", "3", "w", "w+1", "w^2"];
    for a in alphas {
        let f = Family::schreier(o(a));
        match spreading_check(&f, 13) {
            Ok(None) => {}
            Ok(Some((m, g))) => bad.push(format!("S_{a}: {m} in, {g} out")),
            Err(e) => return error(e),
        }
        for mask in 0u32..(1 << 12) {
            let s = subset_of(mask, 12);
            if !family_contains(&f, &s) {
                continue;
            }
            for i in 0..s.len() {
                let mut sub = s.elements().to_vec();
                sub.remove(i);
                let sub = FiniteSet::new(sub).expect("positive elements");
                if !family_contains(&f, &sub) {
                    bad.push(format!("S_{a}: {s} in, {sub} out"));
                }
            }
        }
    }
    tally(bad, alphas.len(), "families on [1,12]")
}

fn witness_values() -> Check {
    let mut bad = Vec::new();
    let mut checked = 0;
    for a in ["2", "3", "w"] {
        for n in 0..=3 {
            checked += 1;
            match summable_like_witness(&o(a), n) {
                Ok(w) => {
                    let delta = rational::pow2_neg(n);
                    if w.values.iter().any(|v| *v != delta) || w.union_value != Rational::from_integer(1.into()) {
                        bad.push(format!("alpha {a}, N {n}"));
                    }
                }
                Err(e) => bad.push(format!("alpha {a}, N {n}: {e}")),
            }
        }
    }
    match trace_vs_i2_witness(3) {
        Ok(w) => {
            checked += w.tails.len() + w.s2_windows.len();
            for t in &w.tails {
                if t.value != rational::pow2_neg(t.k) {
                    bad.push(format!("trace tail k {} block {}", t.k, t.block));
                }
            }
            for s in &w.s2_windows {
                if s.value < Rational::from_integer(1.into()) {
                    bad.push(format!("S2 window [{}, {})", s.lo, s.hi));
                }
            }
        }
        Err(e) => bad.push(format!("trace: {e}")),
    }
    tally(bad, checked, "witness values")
}

fn density_bound() -> Check {
    let mut r = rng(6);
    let bound = ratio(5, 16);
    let mut bad = Vec::new();
    for i in 0..50 {
        let counts: Vec<u64> = (0..=11u32).map(|b| if b < 5 { 0 } else { r.gen_range(0..(1u64 << (b - 4))) }).collect();
        let g = SetGenerator::block_prefix(PrefixRule::Table { counts, default: Box::new(PrefixRule::Zero) });
        match density_bound_check(4, &g, 4, 1 << 12) {
            Ok(d) if d.value <= bound && d.bound == bound => {}
            Ok(d) => bad.push(format!("set {i}: {}", d.value)),
            Err(e) => bad.push(format!("set {i}: {e}")),
        }
    }
    tally(bad, 50, "sets")
}

fn all_measures(depth: u32) -> Vec<Vec<Rational>> {
    let cells = 1u32 << depth;
    (0..5u64.pow(cells))
        .map(|mut code| {
            (0..cells)
                .map(|_| {
                    let v = (code % 5) as i64 - 2;
                    code /= 5;
                    ratio(v, 4)
                })
                .collect()
        })
        .collect()
}

fn variation_identity() -> Check {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut check = |m: DyadicMeasure, bad: &mut Vec<String>| {
        checked += 1;
        if let Err(e) = variation_identity_check(&m) {
            bad.push(format!("depth {}: {e}", m.depth));
        }
    };
    for depth in 0..=3 {
        for values in all_measures(depth) {
            check(DyadicMeasure { depth, values }, &mut bad);
        }
    }
    let mut r = rng(7);
    for _ in 0..100 {
        let values = (0..64).map(|_| ratio(r.gen_range(-8..=8), r.gen_range(1..=8))).collect();
        check(DyadicMeasure { depth: 6, values }, &mut bad);
    }
    tally(bad, checked, "measures")
}

fn l1_c0() -> Check {
    let mut r = rng(8);
    let mut bad = Vec::new();
    let chain = SetGenerator::block_prefix(PrefixRule::One);
    let n = 1 << 10;
    let points = chain.realize(n);
    let samples: Vec<FinVec> = (0..20)
        .map(|_| {
            let pairs: Vec<(u64, Rational)> =
                points.iter().map(|k| (k, ratio(r.gen_range(-9..=9), r.gen_range(1..=6)))).collect();
            FinVec::from_pairs(pairs).expect("positive indices")
        })
        .collect();
    match l1_copy_check(&Family::farah(), &chain, n, &samples) {
        Ok(Certificate::L1Copy { checks, .. }) => {
            for (i, (c, x)) in checks.iter().zip(&samples).enumerate() {
                if c.norm != x.l1() {
                    bad.push(format!("l1 sample {i}"));
                }
            }
        }
        Ok(_) => bad.push("l1: unexpected certificate".into()),
        Err(e) => bad.push(format!("l1: {e}")),
    }
    for i in 0..20 {
        let n = r.gen_range(1..=10u64);
        let period = BitString::new((0..r.gen_range(1..=3)).map(|_| r.gen_bool(0.5)).collect());
        let a: Vec<Rational> = (0..n).map(|_| ratio(r.gen_range(-9..=9), r.gen_range(1..=6))).collect();
        let max = a.iter().map(|v| v.abs()).max().expect("nonempty");
        match c0_branch_check(&period, n, std::slice::from_ref(&a)) {
            Ok(Certificate::C0Branch { checks, .. }) if checks[0].norm == max => {}
            Ok(_) => bad.push(format!("c0 sample {i}")),
            Err(e) => bad.push(format!("c0 sample {i}: {e}")),
        }
    }
    tally(bad, 40, "samples")
}

fn ptak_mazur() -> Check {
    let f = Family::schreier(Ordinal::finite(1));
    let mut bad = Vec::new();
    let limit = Duration::from_secs(10);
    for eps in [ratio(1, 2), ratio(1, 4)] {
        let start = Instant::now();
        match ptak_fill_search(&f, &WeightSeq::Lambda, &eps, 1 << 12) {
            Ok(PtakOutcome::Found { certificate }) => {
                if let Err(e) = certificate.verify() {
                    bad.push(format!("ptak eps {eps}: {e}"));
                }
            }
            Ok(PtakOutcome::FilledUpToHorizon { .. }) => bad.push(format!("ptak eps {eps}: nothing found")),
            Err(e) => bad.push(format!("ptak eps {eps}: {e}")),
        }
        if start.elapsed() > limit {
            bad.push(format!("ptak eps {eps}: over budget"));
        }
        let start = Instant::now();
        match mazur_combination_search(&f, None, &WeightSeq::Lambda, &eps, 1 << 12) {
            Ok(c @ Certificate::Mazur { .. }) => {
                let below = matches!(&c, Certificate::Mazur { value, .. } if *value < eps);
                if !below || c.verify().is_err() {
                    bad.push(format!("mazur eps {eps}"));
                }
            }
            Ok(_) => bad.push(format!("mazur eps {eps}: unexpected certificate")),
            Err(e) => bad.push(format!("mazur eps {eps}: {e}")),
        }
        if start.elapsed() > limit {
            bad.push(format!("mazur eps {eps}: over budget"));
        }
    }
    tally(bad, 4, "searches")
}

fn submeasure_axioms() -> Check {
    let specs = catalog_specs();
    let mut r = rng(10);
    let mut bad = Vec::new();
    for s in &specs {
        if !phi(s, &FiniteSet::empty()).is_zero() {
            bad.push(format!("phi(empty) for {}", family_name(&s.family)));
        }
    }
    for i in 0..500 {
        let s = &specs[r.gen_range(0..specs.len())];
        let a = random_set(&mut r, 64);
        let b = random_set(&mut r, 64);
        let (pa, pb, pu) = (phi(s, &a), phi(s, &b), phi(s, &a.union(&b)));
        if pa > pu || pu > &pa + &pb {
            bad.push(format!("triple {i}"));
        }
    }
    tally(bad, 500 + specs.len(), "checks")
}

fn tail_monotonicity() -> Check {
    let gens = [
        SetGenerator::AllIndices {},
        SetGenerator::block_prefix(PrefixRule::Farah),
        SetGenerator::block_prefix(PrefixRule::HalvedByLog),
    ];
    let cutoffs = [1u64, 2, 4, 8, 16];
    let mut bad = Vec::new();
    let mut checked = 0;
    let profiles = |s: &SubmeasureSpec, g: &SetGenerator| -> Result<Vec<Vec<Rational>>> {
        [16u64, 32, 64]
            .iter()
            .map(|&h| Ok(tail_profile(s, g, &cutoffs, h)?.rows.into_iter().map(|r| r.value).collect()))
            .collect()
    };
    for s in catalog_specs() {
        for g in &gens {
            checked += 1;
            let grid = match profiles(&s, g) {
                Ok(p) => p,
                Err(e) => return error(e),
            };
            let down = grid.iter().all(|row| row.windows(2).all(|w| w[0] >= w[1]));
            let up = grid.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a <= b));
            if !down || !up {
                bad.push(format!("{} with {}", family_name(&s.family), serde_json::to_string(g).expect("json")));
            }
        }
    }
    tally(bad, checked, "submeasure/generator grids")
}

/// The documented CLI examples with their expected stdout.
pub fn cli_examples() -> Vec<(Vec<&'static str>, Vec<&'static str>)> {
    vec![
        (
            vec![
                "norm",
                "--family",
                r#"{"kind":"schreier","alpha":"1"}"#,
                "--vec",
                r#"{"4":"1/4","5":"1/4","6":"1/4","7":"1/4"}"#,
            ],
            vec!["1"],
        ),
        (
            vec!["witness", "summable-like", "--alpha", "2", "--N", "2"],
            vec!["values: [1/4, 1/4, 1/4, 1/4]", "union_value: 1"],
        ),
        (vec!["norm", "--family", r#"{"kind":"all-finite"}"#, "--vec", r#"{"1":"1/2","3":"-3/4"}"#], vec!["5/4"]),
    ]
}

fn determinism() -> Check {
    let mut bad = Vec::new();
    for (args, expect) in cli_examples() {
        let argv = || std::iter::once("combinach").chain(args.iter().copied());
        let first = crate::run(argv());
        let second = crate::run(argv());
        let lines: Vec<&str> = first.stdout.lines().collect();
        if first != second {
            bad.push(format!("{}: output differs between runs", args.join(" ")));
        } else if first.code != 0 || !expect.iter().all(|e| lines.contains(e)) {
            bad.push(format!("{}: unexpected output", args[0]));
        }
    }
    tally(bad, cli_examples().len(), "examples reproduced")
}
