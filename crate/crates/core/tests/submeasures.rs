mod common;

use combinach::finset::block_of;
use combinach::submeasures::{phi, phi_trace, tail_profile, SubmeasureSpec, WeightSeq};
use combinach::{rational, Family, FiniteSet, PrefixRule, SetGenerator};
use common::*;
use rand::seq::SliceRandom;

fn specs() -> Vec<SubmeasureSpec> {
    let taus = [WeightSeq::Lambda, WeightSeq::Harmonic, WeightSeq::One, WeightSeq::FarahBlock];
    let mut out = Vec::new();
    for f in catalog() {
        for t in &taus {
            out.push(SubmeasureSpec::new(f.clone(), t.clone()));
        }
    }
    out
}

#[test]
fn monotone_and_subadditive() {
    let specs = specs();
    let mut r = rng(21);
    for _ in 0..500 {
        let s = specs.choose(&mut r).unwrap();
        let a = random_set(&mut r, 1, 64, 0.05..0.5);
        let b = random_set(&mut r, 1, 64, 0.05..0.5);
        let (pa, pb, pu) = (phi(s, &a), phi(s, &b), phi(s, &a.union(&b)));
        assert!(pa <= pu && pu <= &pa + &pb, "{s:?}");
    }
    for s in &specs {
        assert_eq!(phi(s, &FiniteSet::empty()), rational::int(0));
    }
}

#[test]
fn closed_form_identities() {
    let mut r = rng(22);
    for _ in 0..200 {
        let a = random_set(&mut r, 1, 64, 0.05..0.6);
        for tau in [WeightSeq::Lambda, WeightSeq::Harmonic, WeightSeq::FarahBlock] {
            let all = SubmeasureSpec::new(Family::AllFinite {}, tau.clone());
            assert_eq!(phi(&all, &a), tau.mass(&a));
            let single = SubmeasureSpec::new(Family::Singletons {}, tau.clone());
            let max = a.iter().map(|k| tau.weight(k)).max().unwrap_or_else(|| rational::int(0));
            assert_eq!(phi(&single, &a), max);
        }
        let blocks = SubmeasureSpec::new(Family::PartitionBlocks {}, WeightSeq::Lambda);
        let best = a
            .block_counts()
            .into_iter()
            .map(|(b, c)| rational::int(c as i64) * rational::pow2_neg(b))
            .max()
            .unwrap_or_else(|| rational::int(0));
        assert_eq!(phi(&blocks, &a), best);
    }
}

#[test]
fn lambda_blocks_have_unit_mass() {
    for n in 0..12u32 {
        let (lo, hi) = combinach::finset::block_range(n);
        assert_eq!(WeightSeq::Lambda.mass(&FiniteSet::interval(lo, hi)), rational::int(1));
        assert_eq!(block_of(lo), n);
    }
}

#[test]
fn trace_matches_antichain_submeasure() {
    let spec = SubmeasureSpec::new(Family::Antichains {}, WeightSeq::Lambda);
    let points: Vec<u64> = (1..32).collect();
    let mut checked = 0;
    let mut pick = |set: FiniteSet| {
        assert_eq!(phi_trace(&set), phi(&spec, &set), "{set}");
        checked += 1;
    };
    for a in 0..points.len() {
        pick(FiniteSet::new(vec![points[a]]).unwrap());
        for b in a + 1..points.len() {
            pick(FiniteSet::new(vec![points[a], points[b]]).unwrap());
            for c in b + 1..points.len() {
                pick(FiniteSet::new(vec![points[a], points[b], points[c]]).unwrap());
                for d in c + 1..points.len() {
                    pick(FiniteSet::new(vec![points[a], points[b], points[c], points[d]]).unwrap());
                }
            }
        }
    }
    let mut r = rng(23);
    for _ in 0..500 {
        pick(random_set(&mut r, 1, 32, 0.1..0.9));
    }
    assert!(checked > 36_000);
}

#[test]
fn tail_profiles_are_monotone() {
    let gens = [
        SetGenerator::AllIndices {},
        SetGenerator::block_prefix(PrefixRule::Farah),
        SetGenerator::block_prefix(PrefixRule::HalvedByLog),
    ];
    let cutoffs: Vec<u64> = (0..=6).map(|j| 1 << j).collect();
    for s in specs().into_iter().filter(|s| !matches!(s.family, Family::Schreier { .. })) {
        for g in &gens {
            let mut prev: Option<Vec<_>> = None;
            for horizon in [64u64, 128, 256] {
                let p = tail_profile(&s, g, &cutoffs, horizon).unwrap();
                let vals: Vec<_> = p.rows.iter().map(|r| r.value.clone()).collect();
                assert!(vals.windows(2).all(|w| w[0] >= w[1]), "{s:?} {g:?}");
                if let Some(prev) = &prev {
                    assert!(prev.iter().zip(&vals).all(|(a, b)| a <= b));
                }
                prev = Some(vals);
            }
        }
    }
}

#[test]
fn schreier_tail_profiles_are_monotone() {
    let g = SetGenerator::block_prefix(PrefixRule::One);
    let cutoffs = [1u64, 4, 16, 64];
    for alpha in ["1", "2", "w"] {
        let s = SubmeasureSpec::new(schreier(alpha), WeightSeq::Lambda);
        let small = tail_profile(&s, &g, &cutoffs, 128).unwrap();
        let big = tail_profile(&s, &g, &cutoffs, 1024).unwrap();
        for (a, b) in small.rows.iter().zip(&big.rows) {
            assert!(a.value <= b.value);
        }
        assert!(big.rows.windows(2).all(|w| w[0].value >= w[1].value));
    }
}

#[test]
fn csv_columns() {
    let s = SubmeasureSpec::new(Family::AllFinite {}, WeightSeq::Lambda);
    let p = tail_profile(&s, &SetGenerator::AllIndices {}, &[1, 4], 16).unwrap();
    let csv = p.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("cutoff,horizon,value_rational,value_decimal"));
    assert_eq!(lines.next(), Some("1,16,4,4.000000000000"));
    assert_eq!(lines.next(), Some("4,16,2,2.000000000000"));
}
