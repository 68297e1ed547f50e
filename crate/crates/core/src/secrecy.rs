//! Deciding whether an eavesdropper learns anything about the secret.
//!
//! For a linear view `e = A_u u + A_r r` with `u`, `r` uniform and
//! independent, `I(u; e) = rank([A_u | A_r]) - rank(A_r)` in units of
//! `log q`. [`brute_force_leakage`] gets the same number by running the
//! scheme on every assignment, without looking at any matrix.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::codes::{CodeError, ObservationMatrix, Scheme};
use crate::field::{Elem, Field};
use crate::precode::{Randomness, SecretMessage};

/// Enumeration is refused beyond `q^M` of this size.
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 22;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Rank,
    BruteForce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rank => "rank",
            Method::BruteForce => "bruteforce",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SecrecyVerdict {
    /// `I(u; e)` in `log q` units.
    pub leakage_qunits: usize,
    /// `H(e) <= H(r)`.
    pub lemma_cond_entropy_ok: bool,
    /// `H(r | u, e) = 0`.
    pub lemma_recoverable_ok: bool,
    pub method: Method,
}

impl SecrecyVerdict {
    pub fn is_secure(&self) -> bool {
        self.leakage_qunits == 0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SecrecyError {
    #[error("q^M = {size} assignments exceeds the enumeration limit {limit}")]
    InstanceTooLarge { size: u128, limit: u128 },
    #[error("observed distribution gives non-integral mutual information {0}")]
    NonUniform(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

pub fn rank_leakage<F: Field>(f: &F, obs: &ObservationMatrix) -> SecrecyVerdict {
    let joint = obs.joint().rank(f);
    let ar = obs.a_r.rank(f);
    let r_len = obs.a_r.cols();
    SecrecyVerdict {
        leakage_qunits: joint - ar,
        lemma_cond_entropy_ok: joint <= r_len,
        lemma_recoverable_ok: ar == r_len,
        method: Method::Rank,
    }
}

/// `(rank([A_u | A_r]) <= |r|, rank(A_r) = |r|)`.
pub fn check_secrecy_lemma<F: Field>(f: &F, obs: &ObservationMatrix) -> (bool, bool) {
    let v = rank_leakage(f, obs);
    (v.lemma_cond_entropy_ok, v.lemma_recoverable_ok)
}

/// Every vector of length `len` over `GF(order)`, in counting order.
fn assignments(order: u64, len: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = (order as u128).pow(len as u32);
    (0..total).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let v = (idx % order as u128) as u64;
                idx /= order as u128;
                Elem(v)
            })
            .collect()
    })
}

fn log_q(x: f64, q: u64) -> f64 {
    x.ln() / (q as f64).ln()
}

fn integral(x: f64, what: &str) -> Result<usize, SecrecyError> {
    let r = x.round();
    if (x - r).abs() > 1e-9 || r < 0.0 {
        return Err(SecrecyError::NonUniform(format!("{what} = {x}")));
    }
    Ok(r as usize)
}

/// Exact `I(u; e)` for an arbitrary observation function over uniform
/// `u in GF(q)^u_len`, `r in GF(q)^r_len`.
pub fn brute_force_with<E>(order: u64, u_len: usize, r_len: usize, mut observe: E) -> Result<SecrecyVerdict, SecrecyError>
where
    E: FnMut(&[Elem], &[Elem]) -> Result<Vec<Elem>, SecrecyError>,
{
    let size = (order as u128).checked_pow((u_len + r_len) as u32).unwrap_or(u128::MAX);
    if size > BRUTE_FORCE_LIMIT {
        return Err(SecrecyError::InstanceTooLarge { size, limit: BRUTE_FORCE_LIMIT });
    }
    let mut joint: HashMap<(Vec<Elem>, Vec<Elem>), u64> = HashMap::new();
    let mut marginal: HashMap<Vec<Elem>, u64> = HashMap::new();
    let mut recoverable = true;
    let mut seen_r: HashMap<(Vec<Elem>, Vec<Elem>), Vec<Elem>> = HashMap::new();
    for u in assignments(order, u_len) {
        for r in assignments(order, r_len) {
            let e = observe(&u, &r)?;
            *marginal.entry(e.clone()).or_default() += 1;
            *joint.entry((u.clone(), e.clone())).or_default() += 1;
            match seen_r.get(&(u.clone(), e.clone())) {
                Some(prev) if *prev != r => recoverable = false,
                Some(_) => {}
                None => {
                    seen_r.insert((u.clone(), e), r);
                }
            }
        }
    }
    let total = size as f64;
    let per_u = (order as f64).powi(r_len as i32);
    let h_e: f64 = marginal.values().map(|&c| -(c as f64 / total) * log_q(c as f64 / total, order)).sum();
    let h_e_given_u: f64 = joint.values().map(|&c| -(c as f64 / total) * log_q(c as f64 / per_u, order)).sum();
    let leakage = integral(h_e - h_e_given_u, "I(u;e)")?;
    let h_e = integral(h_e, "H(e)")?;
    Ok(SecrecyVerdict {
        leakage_qunits: leakage,
        lemma_cond_entropy_ok: h_e <= r_len,
        lemma_recoverable_ok: recoverable,
        method: Method::BruteForce,
    })
}

/// Runs `scheme` on every `(u, r)`, replays the repairs in `history`, and
/// collects what `e1` stores and what `e2` stores and downloads.
pub fn brute_force_leakage(
    scheme: &Scheme,
    e1: &[usize],
    e2: &[usize],
    history: &[(Vec<usize>, Vec<usize>)],
) -> Result<SecrecyVerdict, SecrecyError> {
    // Validates ids and overlap the same way as the rank path.
    scheme.observation_from_history(e1, e2, history)?;
    let mut watched: Vec<usize> = e1.iter().chain(e2).copied().collect();
    watched.sort_unstable();
    let order = scheme.field().order();
    brute_force_with(order, scheme.secret_len(), scheme.rand_len(), |u, r| {
        let mut nodes = scheme.encode(&SecretMessage(u.to_vec()), &Randomness::new(r.to_vec()))?;
        let mut e: Vec<Elem> = watched.iter().flat_map(|&i| nodes[i - 1].symbols.clone()).collect();
        for (failed, helpers) in history {
            let survivors: Vec<_> = nodes.iter().filter(|c| !failed.contains(&c.node_id)).cloned().collect();
            let tr = scheme.repair_with_helpers(failed, helpers, &survivors)?;
            if failed.iter().any(|i| e2.contains(i)) {
                for ((_, to), syms) in tr.live.iter().chain(&tr.coop) {
                    if e2.contains(to) {
                        e.extend_from_slice(syms);
                    }
                }
            }
            for c in tr.results {
                let id = c.node_id;
                nodes[id - 1] = c;
            }
        }
        Ok(e)
    })
}
