#![allow(dead_code)]

use coopdss::codes::{NodeContent, Scheme, SchemeKind, SchemeParams};
use coopdss::field::Field;
use coopdss::precode::SecretMessage;
use coopdss::rng::SymbolRng;

/// All `r`-subsets of `1..=n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, r, &mut Vec::new(), &mut out);
    out
}

/// Three rounds of `t` consecutive ids: the first, the last, and the
/// window starting at 2. Every node fails at least once when `n <= 3t`.
pub fn rotating_plan(n: usize, t: usize) -> Vec<Vec<usize>> {
    vec![(1..=t).collect(), (n - t + 1..=n).collect(), (2..=t + 1).collect()]
}

pub fn params(kind: SchemeKind, n: usize, k: usize, d: usize, t: usize, l1: usize, l2: usize) -> SchemeParams {
    SchemeParams::new(kind, n, k, d, t, l1, l2)
}

pub fn random_secret(scheme: &Scheme, rng: &mut SymbolRng) -> SecretMessage {
    SecretMessage(rng.symbols(scheme.field().order(), scheme.secret_len()))
}

pub fn pick(nodes: &[NodeContent], ids: &[usize]) -> Vec<NodeContent> {
    ids.iter().map(|&i| nodes[i - 1].clone()).collect()
}

pub fn without(nodes: &[NodeContent], ids: &[usize]) -> Vec<NodeContent> {
    nodes.iter().filter(|c| !ids.contains(&c.node_id)).cloned().collect()
}

