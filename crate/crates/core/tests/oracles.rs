//! The rank formula against exhaustive enumeration, on every placement of
//! up to two eavesdroppers. Over-budget placements are included so that
//! nonzero leakage values are compared as well.

mod common;

use common::{params, subsets};
use coopdss::codes::{Scheme, SchemeKind};
use coopdss::secrecy::{brute_force_leakage, rank_leakage};

/// `(E1, E2)` with `|E1| + |E2| <= 2`, disjoint.
fn placements(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = vec![];
    for total in 0..=2 {
        for set in subsets(n, total) {
            for mask in 0..(1u32 << total) {
                let (e1, e2): (Vec<_>, Vec<_>) = set.iter().enumerate().partition(|(i, _)| mask & (1 << i) == 0);
                out.push((e1.into_iter().map(|x| *x.1).collect(), e2.into_iter().map(|x| *x.1).collect()));
            }
        }
    }
    out
}

/// Every E2 node is repaired next to its successor.
fn history(scheme: &Scheme, e2: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let p = scheme.params();
    e2.iter()
        .map(|&e| {
            let mut f: Vec<usize> = (0..p.t).map(|j| (e - 1 + j) % p.n + 1).collect();
            f.sort_unstable();
            let h = scheme.default_helpers(&f);
            (f, h)
        })
        .collect()
}

fn agree_on_all_placements(scheme: &Scheme) -> (usize, usize) {
    let p = *scheme.params();
    let (mut checked, mut leaking) = (0, 0);
    for (e1, e2) in placements(p.n) {
        let h = history(scheme, &e2);
        let obs = scheme.observation_from_history(&e1, &e2, &h).unwrap();
        let rank = rank_leakage(scheme.field(), &obs);
        let brute = brute_force_leakage(scheme, &e1, &e2, &h).unwrap();
        assert_eq!(rank.leakage_qunits, brute.leakage_qunits, "{p}: E1={e1:?} E2={e2:?}");
        assert_eq!(rank.lemma_cond_entropy_ok, brute.lemma_cond_entropy_ok, "{p}: E1={e1:?} E2={e2:?}");
        assert_eq!(rank.lemma_recoverable_ok, brute.lemma_recoverable_ok, "{p}: E1={e1:?} E2={e2:?}");
        checked += 1;
        leaking += (rank.leakage_qunits > 0) as usize;
    }
    (checked, leaking)
}

#[test]
fn mscr_ia_n4() {
    for (l1, l2) in [(1, 0), (0, 1)] {
        let scheme = Scheme::new(params(SchemeKind::MscrIa, 4, 2, 2, 2, l1, l2)).unwrap();
        let (checked, leaking) = agree_on_all_placements(&scheme);
        assert_eq!(checked, 1 + 4 * 2 + 6 * 4);
        assert!(leaking > 0);
    }
}

#[test]
fn mscr_ia_n5() {
    for (l1, l2) in [(1, 0), (0, 1)] {
        let scheme = Scheme::new(params(SchemeKind::MscrIa, 5, 2, 3, 2, l1, l2)).unwrap();
        let (_, leaking) = agree_on_all_placements(&scheme);
        assert!(leaking > 0);
    }
}

#[test]
fn mscr_dk_n4() {
    for (l1, l2) in [(1, 0), (0, 1)] {
        let scheme = Scheme::new(params(SchemeKind::MscrDk, 4, 2, 2, 2, l1, l2)).unwrap();
        let (_, leaking) = agree_on_all_placements(&scheme);
        assert!(leaking > 0);
    }
}

#[test]
fn unprecoded_layout_n4() {
    let scheme = Scheme::new(params(SchemeKind::PlainDk, 4, 2, 2, 2, 1, 0)).unwrap();
    let (checked, leaking) = agree_on_all_placements(&scheme);
    assert_eq!(leaking, checked - 1);
}
