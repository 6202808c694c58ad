mod common;

use combinach::diagnostics::{
    c0_branch_check, exh_vs_fin_probe, l1_copy_check, mazur_combination_search, mazur_value, ptak_fill_search,
    variation_by_partitions, variation_identity_check, variation_norm, Certificate, DyadicMeasure, Intervals,
    PtakOutcome,
};
use combinach::norms::ext_norm;
use combinach::submeasures::WeightSeq;
use combinach::{BitString, Family, FinVec, PrefixRule, Rational, SetGenerator};
use common::*;
use num_traits::Signed;
use rand::Rng;

fn quarters(depth: u32) -> Vec<Vec<Rational>> {
    let n = 1usize << depth;
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Rational>| {
                (-2..=2).map(move |p| {
                    let mut w = v.clone();
                    w.push(q(p, 4));
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn variation_identity_exhaustive() {
    for depth in 0..=2 {
        for values in quarters(depth) {
            let m = DyadicMeasure::new(depth, values).unwrap();
            variation_identity_check(&m).unwrap().verify().unwrap();
            assert_eq!(variation_by_partitions(&m).unwrap(), variation_norm(&m));
        }
    }
}

#[test]
fn variation_identity_depth_three() {
    let mut count = 0;
    for mask in 0u32..5u32.pow(8) {
        let values: Vec<Rational> = (0..8).map(|i| q((mask / 5u32.pow(i)) as i64 % 5 - 2, 4)).collect();
        let m = DyadicMeasure::new(3, values).unwrap();
        variation_identity_check(&m).unwrap();
        if mask % 997 == 0 {
            assert_eq!(variation_by_partitions(&m).unwrap(), variation_norm(&m));
        }
        count += 1;
    }
    assert_eq!(count, 390_625);
}

#[test]
fn variation_identity_random_depth_six() {
    let mut r = rng(41);
    for _ in 0..100 {
        let values = (0..64).map(|_| q(r.gen_range(-8..=8), r.gen_range(1..=8))).collect();
        let m = DyadicMeasure::new(6, values).unwrap();
        variation_identity_check(&m).unwrap().verify().unwrap();
    }
}

#[test]
fn l1_copies_are_exact() {
    let mut r = rng(42);
    let chain = SetGenerator::block_prefix(PrefixRule::One);
    let points = chain.realize(64);
    let samples: Vec<FinVec> = (0..20)
        .map(|_| FinVec::from_pairs(points.iter().map(|k| (k, q(r.gen_range(-9..=9), r.gen_range(1..=6))))).unwrap())
        .collect();
    let c = l1_copy_check(&Family::farah(), &chain, 64, &samples).unwrap();
    c.verify().unwrap();
    if let Certificate::L1Copy { checks, .. } = &c {
        assert_eq!(checks.len(), 20);
        for (chk, x) in checks.iter().zip(&samples) {
            assert_eq!(chk.norm, x.l1());
        }
    }
}

#[test]
fn c0_branches_are_exact() {
    let mut r = rng(43);
    for _ in 0..20 {
        let n = r.gen_range(1..=10u64);
        let period = BitString::new((0..r.gen_range(1..4)).map(|_| r.gen_bool(0.5)).collect());
        let a: Vec<Rational> = (0..n).map(|_| q(r.gen_range(-9..=9), r.gen_range(1..=6))).collect();
        let c = c0_branch_check(&period, n, std::slice::from_ref(&a)).unwrap();
        c.verify().unwrap();
        if let Certificate::C0Branch { checks, .. } = &c {
            let max = a.iter().map(|v| v.abs()).max().unwrap();
            assert_eq!(checks[0].norm, max);
        }
    }
}

#[test]
fn ptak_finds_sets_for_precompact_families() {
    for f in [schreier("1"), Family::Singletons {}, Family::PartitionBlocks {}] {
        for eps in [q(1, 2), q(1, 4), q(1, 8)] {
            match ptak_fill_search(&f, &WeightSeq::Lambda, &eps, 1 << 12).unwrap() {
                PtakOutcome::Found { certificate } => certificate.verify().unwrap(),
                other => panic!("{f:?} {eps}: {other:?}"),
            }
        }
    }
}

#[test]
fn ptak_schreier_two_fills_small_windows() {
    for horizon in [1 << 5, 1 << 6] {
        match ptak_fill_search(&schreier("2"), &WeightSeq::Lambda, &q(1, 2), horizon).unwrap() {
            PtakOutcome::FilledUpToHorizon { best_ratio, .. } => assert_eq!(best_ratio, q(3, 4)),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn mazur_values_shrink_with_length() {
    for a in 1..5u32 {
        let values: Vec<Rational> = (a + 1..=12)
            .map(|b| mazur_value(&schreier("1"), &WeightSeq::Lambda, None, &Intervals::dyadic(a, b).to_set()))
            .collect();
        assert!(values.windows(2).all(|w| w[0] >= w[1]), "a={a}");
    }
    for eps in [q(1, 2), q(1, 4)] {
        let c = mazur_combination_search(&schreier("1"), None, &WeightSeq::Lambda, &eps, 1 << 12).unwrap();
        c.verify().unwrap();
        assert!(matches!(c, Certificate::Mazur { below_epsilon: true, .. }));
    }
}

#[test]
fn exh_fin_certificates_verify() {
    for (f, tau) in [
        (Family::Singletons {}, WeightSeq::One),
        (Family::AllFinite {}, WeightSeq::Lambda),
        (Family::Antichains {}, WeightSeq::Lambda),
        (Family::farah(), WeightSeq::FarahBlock),
    ] {
        let c = exh_vs_fin_probe(&f, &tau, &SetGenerator::AllIndices {}, 1 << 9).unwrap();
        c.verify().unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"kind\":\"exh-fin\""));
    }
}

#[test]
fn antichain_norm_of_a_measure_is_its_variation() {
    let m = DyadicMeasure::new(2, vec![q(1, 1), q(-1, 1), q(1, 2), q(-1, 2)]).unwrap();
    assert_eq!(ext_norm(&Family::Antichains {}, &m.node_vector()), q(3, 1));
}
