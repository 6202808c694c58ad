mod common;

use combinach::families::{
    chain_witness_check, delta_system_extract, enumerate_members, family_contains, precompact_status, spreading_check,
    PrecompactStatus,
};
use combinach::{Family, FiniteSet};
use common::*;
use rand::Rng;

#[test]
fn built_ins_are_hereditary() {
    let n = 12u64;
    for f in catalog() {
        for mask in 0u32..(1 << (n - 1)) {
            let s = subset_of(mask, n);
            if !family_contains(&f, &s) {
                continue;
            }
            for (i, _) in s.elements().iter().enumerate() {
                let mut sub = s.elements().to_vec();
                sub.remove(i);
                let sub = FiniteSet::new(sub).unwrap();
                assert!(family_contains(&f, &sub), "{f:?}: {s} in, {sub} out");
            }
        }
    }
}

#[test]
fn enumeration_agrees_with_membership() {
    for f in catalog() {
        for n in [6u64, 9, 12] {
            let listed = enumerate_members(&f, n, None);
            assert!(!listed.truncated);
            let direct: Vec<FiniteSet> =
                (0u32..(1 << (n - 1))).map(|m| subset_of(m, n)).filter(|s| family_contains(&f, s)).collect();
            let mut sorted = listed.members.clone();
            sorted.sort();
            let mut direct_sorted = direct;
            direct_sorted.sort();
            assert_eq!(sorted, direct_sorted, "{f:?} n={n}");
            for w in listed.members.windows(2) {
                assert!((w[0].len(), &w[0]) < (w[1].len(), &w[1]));
            }
        }
    }
}

#[test]
fn non_precompact_witnesses_are_chains() {
    for f in catalog() {
        if let PrecompactStatus::NotPrecompact { witness } = precompact_status(&f) {
            for n in [16, 64, 256] {
                assert!(chain_witness_check(&f, &witness, n), "{f:?} n={n}");
            }
        }
    }
    assert!(matches!(precompact_status(&schreier("w")), PrecompactStatus::Precompact { .. }));
}

#[test]
fn delta_systems_pass_independent_check() {
    let mut r = rng(7);
    for round in 0..30 {
        let sets: Vec<FiniteSet> = (0..20)
            .map(|_| {
                let len = r.gen_range(1..=3);
                FiniteSet::new((0..len).map(|_| r.gen_range(1..=10)).collect()).unwrap()
            })
            .collect();
        if let Some(d) = delta_system_extract(&sets, 3).unwrap() {
            assert_eq!(d.indices.len(), 3, "round {round}");
            for (i, &a) in d.indices.iter().enumerate() {
                assert_eq!(sets[a], d.sets[i]);
                for &b in &d.indices[i + 1..] {
                    let inter: Vec<u64> = sets[a].iter().filter(|k| sets[b].elements().contains(k)).collect();
                    assert_eq!(inter, d.root.elements(), "round {round}");
                }
            }
        }
    }
}

#[test]
fn catalog_families_are_spreading_except_blocks() {
    for f in catalog() {
        let res = spreading_check(&f, 11).unwrap();
        match f {
            Family::PartitionBlocks {} | Family::BlockCappedLocal { .. } | Family::Antichains {} => {
                assert!(res.is_some(), "{f:?}")
            }
            Family::BlockCappedJoined { .. } => {}
            _ => assert!(res.is_none(), "{f:?}: {res:?}"),
        }
    }
}

#[test]
fn restrict_limits_to_window() {
    let f = Family::Restrict { base: Box::new(schreier("1")), window: combinach::set![3, 4, 5, 9] };
    assert!(family_contains(&f, &combinach::set![3, 4, 5]));
    assert!(!family_contains(&f, &combinach::set![3, 6]));
    assert!(!family_contains(&f, &combinach::set![3, 4, 5, 9]));
}
