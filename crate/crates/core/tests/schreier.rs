mod common;

use combinach::families::{family_contains, spreading_check};
use combinach::schreier::{
    density_bound_check, phi_alpha, schreier_contains, summable_like_witness, trace_vs_i2_witness, Membership,
};
use combinach::{rational, Error, FiniteSet, PrefixRule, SetGenerator};
use common::*;
use rand::Rng;

#[test]
fn first_schreier_law() {
    let one = o("1");
    let mut recursive = Membership::recursive_only();
    for mask in 0u32..(1 << 12) {
        let f = subset_of(mask, 13);
        let law = f.first().is_none_or(|m| f.len() as u64 <= m);
        assert_eq!(schreier_contains(&one, &f).unwrap(), law, "{f}");
        assert_eq!(recursive.contains(&one, f.elements()), law, "{f}");
    }
}

#[test]
fn hereditary_and_spreading() {
    for alpha in ["1", "2", "3", "w", "w+1", "w^2"] {
        let f = schreier(alpha);
        assert_eq!(spreading_check(&f, 13).unwrap(), None, "{alpha}");
        for mask in 0u32..(1 << 12) {
            let s = subset_of(mask, 13);
            if family_contains(&f, &s) {
                for i in 0..s.len() {
                    let mut sub = s.elements().to_vec();
                    sub.remove(i);
                    assert!(family_contains(&f, &FiniteSet::new(sub).unwrap()));
                }
            }
        }
    }
}

#[test]
fn finite_levels_sit_inside_higher_ones() {
    for n in 1..=3u64 {
        let sn = o(&n.to_string());
        for alpha in ["3", "w", "w^2"].map(o) {
            for mask in 0u32..(1 << 12) {
                let f = subset_of(mask, 13);
                if f.first().is_none_or(|m| m >= n) && schreier_contains(&sn, &f).unwrap() {
                    assert!(schreier_contains(&alpha, &f).unwrap(), "S_{n} {f} not in S_{alpha}");
                }
            }
        }
    }
}

#[test]
fn summable_like_values() {
    for alpha in ["2", "3", "w"].map(o) {
        for n in 0..=3 {
            let w = summable_like_witness(&alpha, n).unwrap();
            assert!(w.values.iter().all(|v| *v == rational::pow2_neg(n)));
            assert_eq!(w.union_value, rational::int(1));
            assert_eq!(w.sets.len(), 1 << n);
        }
    }
}

#[test]
fn summable_like_lower_levels_see_more() {
    let w = summable_like_witness(&o("3"), 2).unwrap();
    for (s, v) in w.sets.iter().zip(&w.values) {
        assert!(phi_alpha(&o("1"), s).unwrap() <= *v);
        assert!(phi_alpha(&o("w"), s).unwrap() >= *v);
    }
}

#[test]
fn trace_witness_values() {
    let w = trace_vs_i2_witness(3).unwrap();
    for t in &w.tails {
        assert_eq!(t.value, rational::pow2_neg(t.k));
    }
    assert_eq!(w.s2_windows.len(), 4);
    assert!(w.s2_windows.iter().all(|s| s.value >= rational::int(1)));
    assert!(matches!(trace_vs_i2_witness(4), Err(Error::Precondition(_))));
}

#[test]
fn density_bound_on_sparse_sets() {
    let mut r = rng(31);
    let bound = q(5, 16);
    for _ in 0..20 {
        let counts: Vec<u64> = (0..=10u32).map(|b| if b < 5 { 0 } else { r.gen_range(0..(1u64 << (b - 4))) }).collect();
        let g = SetGenerator::tail_from(
            16,
            SetGenerator::block_prefix(PrefixRule::Table { counts, default: Box::new(PrefixRule::Zero) }),
        );
        let d = density_bound_check(4, &g, 4, 1 << 11).unwrap();
        assert!(d.value <= bound && d.bound == bound);
    }
    let dense = SetGenerator::block_prefix(PrefixRule::Full);
    assert!(matches!(density_bound_check(4, &dense, 4, 64), Err(Error::Precondition(_))));
}

#[test]
fn depth_cap_is_enforced() {
    assert!(matches!(o("w^w").fundamental(0), Err(Error::InvalidArgument(_))));
    assert!(combinach::Ordinal::parse("w^w^w^w").is_err());
}
