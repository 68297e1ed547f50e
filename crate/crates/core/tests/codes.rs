mod common;

use common::{params, pick, random_secret, rotating_plan, subsets, without};
use coopdss::codes::{RepairTranscript, RowSource, Scheme, SchemeKind, SchemeParams};
use coopdss::field::{Elem, Field};
use coopdss::precode::{Randomness, SecretMessage};
use coopdss::rng::SymbolRng;
use coopdss::secrecy::{check_secrecy_lemma, rank_leakage};

use SchemeKind::*;

fn grid() -> Vec<SchemeParams> {
    let mut out = vec![];
    for (n, k, d, t) in [(3, 1, 1, 2), (4, 2, 2, 2), (4, 2, 3, 1), (5, 2, 3, 2), (5, 3, 3, 2), (5, 2, 2, 3), (6, 3, 3, 3)] {
        for l1 in 0..k {
            out.push(params(MbcrExact, n, k, d, t, l1, 0));
        }
    }
    for (n, k, d, t) in [(5, 2, 2, 2), (6, 2, 3, 2), (6, 3, 3, 2), (5, 2, 2, 1)] {
        for l1 in 0..k {
            out.push(params(MbcrBivariate, n, k, d, t, l1, 0));
        }
    }
    for n in [4, 5] {
        for (l1, l2) in [(0, 0), (1, 0), (0, 1)] {
            out.push(params(MscrIa, n, 2, n - 2, 2, l1, l2));
        }
    }
    for k in [2, 3] {
        for t in [2, 3] {
            for l1 in 0..k {
                for l2 in (0..k - l1).filter(|&l2| l2 < t) {
                    out.push(params(MscrDk, k + t, k, k, t, l1, l2));
                }
            }
        }
    }
    out
}

fn build(p: SchemeParams) -> Scheme {
    Scheme::new(p).unwrap_or_else(|e| panic!("{p}: {e}"))
}

fn check_transcript(scheme: &Scheme, tr: &RepairTranscript) {
    let p = scheme.params();
    let per = p.d * scheme.beta() + (p.t - 1) * scheme.beta_prime();
    for &f in &tr.failed {
        assert_eq!(tr.download(f), per, "{p}: newcomer {f} of {:?}", tr.failed);
    }
    assert_eq!(per, scheme.gamma());
    assert_eq!(tr.total_bandwidth(), p.t * scheme.gamma(), "{p}");
    assert_eq!(tr.helpers.len(), p.d);
}

#[test]
fn exact_repair_mds_and_bandwidth_on_grid() {
    let mut rng = SymbolRng::new(41);
    for p in grid() {
        let scheme = build(p);
        let u = random_secret(&scheme, &mut rng);
        let nodes = scheme.encode_seeded(&u, rng.next_u64()).unwrap();
        assert_eq!(nodes.len(), p.n);
        assert!(nodes.iter().all(|c| c.symbols.len() == scheme.alpha()));
        for set in subsets(p.n, p.k) {
            assert_eq!(scheme.reconstruct(&pick(&nodes, &set)).unwrap(), u, "{p}: collector {set:?}");
        }
        for set in subsets(p.n, p.k - 1) {
            assert!(scheme.reconstruct(&pick(&nodes, &set)).is_err(), "{p}: {set:?} is too few");
        }
        for failed in subsets(p.n, p.t) {
            let tr = scheme.repair(&failed, &without(&nodes, &failed)).unwrap();
            check_transcript(&scheme, &tr);
            assert_eq!(tr.results, pick(&nodes, &failed), "{p}: repair of {failed:?}");
        }
    }
}

#[test]
fn repair_is_exact_with_any_helper_set() {
    let mut rng = SymbolRng::new(42);
    for p in grid().into_iter().filter(|p| p.n > p.d + p.t) {
        let scheme = build(p);
        let nodes = scheme.encode_seeded(&random_secret(&scheme, &mut rng), 3).unwrap();
        for failed in subsets(p.n, p.t) {
            let pool: Vec<usize> = (1..=p.n).filter(|i| !failed.contains(i)).collect();
            for _ in 0..4 {
                let helpers = rng.choose(&pool, p.d);
                let tr = scheme.repair_with_helpers(&failed, &helpers, &without(&nodes, &failed)).unwrap();
                check_transcript(&scheme, &tr);
                assert_eq!(tr.results, pick(&nodes, &failed), "{p}: helpers {helpers:?}");
            }
        }
    }
}

/// The symbols the eavesdroppers actually saw, in the order of `labels`.
fn observed(labels: &[RowSource], stored: &[coopdss::codes::NodeContent], rounds: &[RepairTranscript]) -> Vec<Elem> {
    labels
        .iter()
        .map(|l| match *l {
            RowSource::Stored { node, index } => stored[node - 1].symbols[index],
            RowSource::Live { repair, helper, newcomer, index } => rounds[repair].live[&(helper, newcomer)][index],
            RowSource::Coop { repair, from, to, index } => rounds[repair].coop[&(from, to)][index],
        })
        .collect()
}

#[test]
fn observation_matrix_matches_transferred_symbols() {
    let mut rng = SymbolRng::new(43);
    for p in grid() {
        let scheme = build(p);
        let f = scheme.field();
        let plan = rotating_plan(p.n, p.t);
        let history: Vec<(Vec<usize>, Vec<usize>)> = plan
            .iter()
            .map(|set| {
                let pool: Vec<usize> = (1..=p.n).filter(|i| !set.contains(i)).collect();
                (set.clone(), rng.choose(&pool, p.d))
            })
            .collect();
        let e1 = vec![p.n];
        let e2 = vec![1, 2];
        let obs = scheme.observation_from_history(&e1, &e2, &history).unwrap();
        for _ in 0..100 {
            let u = SecretMessage(rng.symbols(f.order(), scheme.secret_len()));
            let r = Randomness::new(rng.symbols(f.order(), scheme.rand_len()));
            let initial = scheme.encode(&u, &r).unwrap();
            let mut nodes = initial.clone();
            let mut rounds = vec![];
            for (failed, helpers) in &history {
                let tr = scheme.repair_with_helpers(failed, helpers, &without(&nodes, failed)).unwrap();
                for c in &tr.results {
                    nodes[c.node_id - 1] = c.clone();
                }
                rounds.push(tr);
            }
            assert_eq!(observed(&obs.labels, &initial, &rounds), obs.evaluate(f, &u.0, &r.symbols), "{p}");
        }
    }
}

/// The entropy condition holds for every placement and the full lemma for
/// at least one. Placements whose views overlap (two E2 nodes fed the same
/// message block) see fewer than `|r|` independent symbols, so the
/// recoverability condition can fail there while leakage stays zero.
#[test]
fn lemma_conditions_hold_for_admissible_placements() {
    for p in grid() {
        let scheme = build(p);
        let plan = rotating_plan(p.n, p.t);
        let history: Vec<(Vec<usize>, Vec<usize>)> =
            plan.iter().map(|s| (s.clone(), scheme.default_helpers(s))).collect();
        let mut full = 0;
        for e1 in subsets(p.n, p.l1) {
            for e2 in subsets(p.n, p.l2).into_iter().filter(|s| s.iter().all(|i| !e1.contains(i))) {
                let obs = scheme.observation_from_history(&e1, &e2, &history).unwrap();
                let v = rank_leakage(scheme.field(), &obs);
                assert!(v.is_secure(), "{p}: E1={e1:?} E2={e2:?} leak {}", v.leakage_qunits);
                let (cond, recov) = check_secrecy_lemma(scheme.field(), &obs);
                assert!(cond, "{p}: E1={e1:?} E2={e2:?} observe more than |r|");
                full += recov as usize;
            }
        }
        assert!(full > 0, "{p}: lemma never holds");
    }
}

#[test]
fn secure_size_matches_the_closed_forms() {
    for p in grid() {
        let scheme = build(p);
        let (k, d, t, l1, l2) = (p.k as i64, p.d as i64, p.t as i64, p.l1 as i64, p.l2 as i64);
        let want = match p.kind {
            MbcrExact | MbcrBivariate => (k - l1) * (2 * d + t - k - l1),
            MscrIa => match (l1, l2) {
                (0, 0) => k * (d - k + t),
                (1, 0) => d - k + t,
                _ => d - k + t - 1,
            },
            MscrDk | PlainDk => (k - l1 - l2) * (t - l2),
        };
        assert_eq!(scheme.secret_len() as i64, want, "{p}");
    }
}

#[test]
fn unprecoded_layout_leaks() {
    for (k, t) in [(2, 2), (3, 2), (2, 3)] {
        let p = params(PlainDk, k + t, k, k, t, 1, 0);
        let scheme = build(p);
        for e in 1..=p.n {
            let obs = scheme.observation_from_history(&[e], &[], &[]).unwrap();
            let v = rank_leakage(scheme.field(), &obs);
            assert!(v.leakage_qunits > 0, "{p}: node {e} should leak");
            assert_ne!(check_secrecy_lemma(scheme.field(), &obs), (true, true));
        }
    }
}

#[test]
fn rejects_malformed_inputs() {
    let scheme = build(params(MbcrExact, 4, 2, 2, 2, 1, 0));
    let u = SecretMessage(vec![Elem(0); scheme.secret_len() + 1]);
    assert!(scheme.encode_seeded(&u, 0).is_err());
    let nodes = scheme.encode_seeded(&SecretMessage(vec![Elem(1); scheme.secret_len()]), 0).unwrap();
    assert!(scheme.repair(&[1], &without(&nodes, &[1])).is_err());
    assert!(scheme.repair(&[1, 2], &pick(&nodes, &[3])).is_err());
    assert!(scheme.reconstruct(&pick(&nodes, &[1, 1])).is_err());
    assert!(Scheme::new(params(MbcrExact, 4, 3, 2, 2, 0, 0)).is_err());
    assert!(Scheme::new(params(MscrIa, 5, 2, 3, 2, 1, 1)).is_err());
    assert!(Scheme::new(params(MscrDk, 5, 2, 3, 2, 0, 0)).is_err());
}
