//! Lifetime simulation: encode once, run rounds of `t` simultaneous
//! failures with cooperative repair, and accumulate what the eavesdropper
//! sees over the whole run.
//!
//! Trace format, one record per line:
//!
//! ```text
//! # coopdss trace v1
//! scheme,<kind>,<n>,<k>,<d>,<t>,<l1>,<l2>
//! eavesdropper,<e1 ids separated by spaces>,<e2 ids>
//! state,initial,<node>,<symbol hex>...
//! <round>,<src>,<dst>,<live|coop>,<symbol hex>...
//! summary,<round>,<failed ids>,<helper ids>,<bandwidth>
//! state,final,<node>,<symbol hex>...
//! ```
//!
//! Rounds are numbered from 1. Symbols are lower-case hex, two digits per
//! byte of the field's symbol width.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::codes::{CodeError, NodeContent, ObservationMatrix, RepairTranscript, Scheme, SchemeKind, SchemeParams};
use crate::field::{Elem, Field};
use crate::precode::{Randomness, SecretMessage};
use crate::rng::SymbolRng;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("E2 node {0} never fails in the failure plan")]
    E2NeverRepaired(usize),
    #[error("round {round} moved {got} symbols, expected {want}")]
    Bandwidth { round: usize, got: usize, want: usize },
    #[error("trace line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailurePlan {
    Explicit(Vec<Vec<usize>>),
    /// `t` nodes drawn uniformly each round.
    Random { seed: u64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HelperMode {
    /// The `d` lowest-id survivors.
    Lowest,
    /// `d` survivors drawn uniformly each round.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub params: SchemeParams,
    pub rounds: usize,
    pub plan: FailurePlan,
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
    pub helpers: HelperMode,
    /// Seeds the secret (when not given) and the randomness.
    pub data_seed: u64,
    pub secret: Option<Vec<Elem>>,
}

impl SimConfig {
    pub fn new(params: SchemeParams, plan: Vec<Vec<usize>>) -> Self {
        SimConfig {
            params,
            rounds: plan.len(),
            plan: FailurePlan::Explicit(plan),
            e1: vec![],
            e2: vec![],
            helpers: HelperMode::Lowest,
            data_seed: 0,
            secret: None,
        }
    }

    pub fn with_eavesdroppers(mut self, e1: &[usize], e2: &[usize]) -> Self {
        self.e1 = e1.to_vec();
        self.e2 = e2.to_vec();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTrace {
    pub params: SchemeParams,
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
    pub initial: Vec<NodeContent>,
    pub rounds: Vec<RepairTranscript>,
    pub bandwidth: Vec<usize>,
    pub final_nodes: Vec<NodeContent>,
    /// Cumulative eavesdropper view.
    pub observation: ObservationMatrix,
}

impl SimTrace {
    pub fn history(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.rounds.iter().map(|t| (t.failed.clone(), t.helpers.clone())).collect()
    }
}

fn failure_sets(cfg: &SimConfig) -> Result<Vec<Vec<usize>>, SimError> {
    let SchemeParams { n, t, .. } = cfg.params;
    let sets = match &cfg.plan {
        FailurePlan::Explicit(sets) => {
            if sets.len() != cfg.rounds {
                return Err(SimError::InvalidConfig(format!(
                    "{} rounds requested but the plan lists {}",
                    cfg.rounds,
                    sets.len()
                )));
            }
            sets.clone()
        }
        FailurePlan::Random { seed } => {
            let mut rng = SymbolRng::new(*seed);
            let pool: Vec<usize> = (1..=n).collect();
            (0..cfg.rounds).map(|_| rng.choose(&pool, t)).collect()
        }
    };
    for set in &sets {
        let distinct: BTreeSet<usize> = set.iter().copied().collect();
        if set.len() != t || distinct.len() != t || set.iter().any(|&i| i == 0 || i > n) {
            return Err(SimError::InvalidConfig(format!("failure set {set:?} is not {t} distinct ids in 1..={n}")));
        }
    }
    Ok(sets)
}

fn data(scheme: &Scheme, cfg: &SimConfig) -> Result<(SecretMessage, Randomness), SimError> {
    let order = scheme.field().order();
    let mut rng = SymbolRng::new(cfg.data_seed);
    let u = match &cfg.secret {
        Some(u) => u.clone(),
        None => rng.symbols(order, scheme.secret_len()),
    };
    let r = rng.symbols(order, scheme.rand_len());
    Ok((SecretMessage(u), Randomness::new(r)))
}

pub fn run(cfg: &SimConfig) -> Result<SimTrace, SimError> {
    let scheme = Scheme::new(cfg.params)?;
    run_with(&scheme, cfg)
}

/// As [`run`], reusing an already built scheme.
pub fn run_with(scheme: &Scheme, cfg: &SimConfig) -> Result<SimTrace, SimError> {
    if *scheme.params() != cfg.params {
        return Err(SimError::InvalidConfig("scheme does not match the configured parameters".into()));
    }
    let sets = failure_sets(cfg)?;
    let n = cfg.params.n;
    for &i in cfg.e1.iter().chain(&cfg.e2) {
        if i == 0 || i > n {
            return Err(CodeError::UnknownNode(i).into());
        }
    }
    if let Some(&i) = cfg.e1.iter().find(|i| cfg.e2.contains(i)) {
        return Err(CodeError::EavesdropperOverlap(i).into());
    }
    if !sets.is_empty() {
        if let Some(&i) = cfg.e2.iter().find(|i| !sets.iter().any(|s| s.contains(i))) {
            return Err(SimError::E2NeverRepaired(i));
        }
    }
    let (u, r) = data(scheme, cfg)?;
    let initial = scheme.encode(&u, &r)?;
    let mut nodes = initial.clone();
    let mut helper_rng = match cfg.helpers {
        HelperMode::Random { seed } => Some(SymbolRng::new(seed)),
        HelperMode::Lowest => None,
    };
    let mut rounds = Vec::with_capacity(sets.len());
    let mut bandwidth = Vec::with_capacity(sets.len());
    for failed in &sets {
        let survivors: Vec<NodeContent> = nodes.iter().filter(|c| !failed.contains(&c.node_id)).cloned().collect();
        let helpers = match helper_rng.as_mut() {
            None => scheme.default_helpers(failed),
            Some(rng) => {
                let pool: Vec<usize> = survivors.iter().map(|c| c.node_id).collect();
                rng.choose(&pool, cfg.params.d)
            }
        };
        let tr = scheme.repair_with_helpers(failed, &helpers, &survivors)?;
        for c in &tr.results {
            nodes[c.node_id - 1] = c.clone();
        }
        let want = cfg.params.t * scheme.gamma();
        if tr.total_bandwidth() != want {
            return Err(SimError::Bandwidth { round: rounds.len() + 1, got: tr.total_bandwidth(), want });
        }
        bandwidth.push(tr.total_bandwidth());
        rounds.push(tr);
    }
    let history: Vec<(Vec<usize>, Vec<usize>)> = rounds.iter().map(|t| (t.failed.clone(), t.helpers.clone())).collect();
    let observation = if history.is_empty() {
        scheme.observation_from_history(&cfg.e1, &[], &[])?
    } else {
        scheme.observation_from_history(&cfg.e1, &cfg.e2, &history)?
    };
    Ok(SimTrace {
        params: cfg.params,
        e1: cfg.e1.clone(),
        e2: cfg.e2.clone(),
        initial,
        rounds,
        bandwidth,
        final_nodes: nodes,
        observation,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayReport {
    pub diffs: Vec<String>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Recomputes every transfer of `trace` from the survivor states and checks
/// that each round restores the failed nodes exactly.
pub fn replay_check(trace: &SimTrace) -> Result<ReplayReport, SimError> {
    let scheme = Scheme::new(trace.params)?;
    Ok(replay_check_with(&scheme, trace))
}

pub fn replay_check_with(scheme: &Scheme, trace: &SimTrace) -> ReplayReport {
    let mut report = ReplayReport::default();
    let mut nodes = trace.initial.clone();
    for (idx, tr) in trace.rounds.iter().enumerate() {
        let round = idx + 1;
        let survivors: Vec<NodeContent> = nodes.iter().filter(|c| !tr.failed.contains(&c.node_id)).cloned().collect();
        let fresh = match scheme.repair_with_helpers(&tr.failed, &tr.helpers, &survivors) {
            Ok(f) => f,
            Err(e) => {
                report.diffs.push(format!("round {round}: repair failed: {e}"));
                continue;
            }
        };
        for (kind, got, want) in [("live", &tr.live, &fresh.live), ("coop", &tr.coop, &fresh.coop)] {
            let keys: BTreeSet<_> = got.keys().chain(want.keys()).collect();
            for key in keys {
                match (got.get(key), want.get(key)) {
                    (Some(g), Some(w)) if g == w => {}
                    (g, w) => report.diffs.push(format!(
                        "round {round}: {kind} {}->{}: trace {:?}, recomputed {:?}",
                        key.0, key.1, g, w
                    )),
                }
            }
        }
        for c in &fresh.results {
            if c.symbols != nodes[c.node_id - 1].symbols {
                report.diffs.push(format!("round {round}: node {} not restored exactly", c.node_id));
            }
        }
        for c in &tr.results {
            if c.symbols != nodes[c.node_id - 1].symbols {
                report.diffs.push(format!("round {round}: traced result for node {} differs", c.node_id));
            }
        }
        for c in fresh.results {
            let id = c.node_id;
            nodes[id - 1] = c;
        }
    }
    if trace.final_nodes != trace.initial {
        for (a, b) in trace.final_nodes.iter().zip(&trace.initial) {
            if a != b {
                report.diffs.push(format!("final state of node {} differs from the initial one", a.node_id));
            }
        }
    }
    report
}

fn hex(symbols: &[Elem], width: usize) -> String {
    symbols.iter().map(|s| format!(",{:0w$x}", s.0, w = width * 2)).collect()
}

fn ids(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

impl SimTrace {
    pub fn to_text(&self, symbol_bytes: usize) -> String {
        let p = &self.params;
        let mut out = String::from("# coopdss trace v1\n");
        let _ = writeln!(out, "scheme,{},{},{},{},{},{},{}", p.kind, p.n, p.k, p.d, p.t, p.l1, p.l2);
        let _ = writeln!(out, "eavesdropper,{},{}", ids(&self.e1), ids(&self.e2));
        for c in &self.initial {
            let _ = writeln!(out, "state,initial,{}{}", c.node_id, hex(&c.symbols, symbol_bytes));
        }
        for (idx, tr) in self.rounds.iter().enumerate() {
            let round = idx + 1;
            for (kind, map) in [("live", &tr.live), ("coop", &tr.coop)] {
                for ((src, dst), syms) in map {
                    let _ = writeln!(out, "{round},{src},{dst},{kind}{}", hex(syms, symbol_bytes));
                }
            }
            let _ = writeln!(out, "summary,{round},{},{},{}", ids(&tr.failed), ids(&tr.helpers), self.bandwidth[idx]);
        }
        for c in &self.final_nodes {
            let _ = writeln!(out, "state,final,{}{}", c.node_id, hex(&c.symbols, symbol_bytes));
        }
        out
    }

    /// Parses [`SimTrace::to_text`] output. The observation matrix is
    /// rebuilt from the recorded rounds.
    pub fn parse(text: &str) -> Result<(Scheme, SimTrace), SimError> {
        let err = |line: usize, msg: &str| SimError::Parse { line, msg: msg.to_string() };
        let parse_ids = |line: usize, s: &str| -> Result<Vec<usize>, SimError> {
            s.split_whitespace().map(|v| v.parse().map_err(|_| err(line, "bad node id"))).collect()
        };
        let mut scheme: Option<Scheme> = None;
        let (mut e1, mut e2) = (vec![], vec![]);
        let mut initial = Vec::new();
        let mut final_nodes = Vec::new();
        let mut transfers: BTreeMap<usize, (BTreeMap<(usize, usize), Vec<Elem>>, BTreeMap<(usize, usize), Vec<Elem>>)> =
            BTreeMap::new();
        let mut summaries: Vec<(Vec<usize>, Vec<usize>, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split(',').collect();
            let num = |s: &str| s.trim().parse::<usize>().map_err(|_| err(line, "expected a number"));
            let syms = |fs: &[&str]| -> Result<Vec<Elem>, SimError> {
                fs.iter().map(|h| u64::from_str_radix(h, 16).map(Elem).map_err(|_| err(line, "bad symbol hex"))).collect()
            };
            match fields[0] {
                "scheme" => {
                    if fields.len() != 8 {
                        return Err(err(line, "scheme record needs 8 fields"));
                    }
                    let kind: SchemeKind = fields[1].parse().map_err(|e: String| err(line, &e))?;
                    let v: Vec<usize> = fields[2..].iter().map(|f| num(f)).collect::<Result<_, _>>()?;
                    let params = SchemeParams::new(kind, v[0], v[1], v[2], v[3], v[4], v[5]);
                    scheme = Some(Scheme::new(params)?);
                }
                "eavesdropper" => {
                    if fields.len() != 3 {
                        return Err(err(line, "eavesdropper record needs 3 fields"));
                    }
                    e1 = parse_ids(line, fields[1])?;
                    e2 = parse_ids(line, fields[2])?;
                }
                "state" => {
                    let s = scheme.as_ref().ok_or_else(|| err(line, "state before scheme"))?;
                    if fields.len() < 3 {
                        return Err(err(line, "short state record"));
                    }
                    let c = NodeContent { node_id: num(fields[2])?, symbols: syms(&fields[3..])?, layout: s.layout() };
                    match fields[1] {
                        "initial" => initial.push(c),
                        "final" => final_nodes.push(c),
                        _ => return Err(err(line, "state must be initial or final")),
                    }
                }
                "summary" => {
                    if fields.len() != 5 {
                        return Err(err(line, "summary record needs 5 fields"));
                    }
                    if num(fields[1])? != summaries.len() + 1 {
                        return Err(err(line, "rounds out of order"));
                    }
                    summaries.push((parse_ids(line, fields[2])?, parse_ids(line, fields[3])?, num(fields[4])?));
                }
                _ => {
                    if fields.len() < 4 {
                        return Err(err(line, "short transfer record"));
                    }
                    let round = num(fields[0])?;
                    let key = (num(fields[1])?, num(fields[2])?);
                    let entry = transfers.entry(round).or_default();
                    let target = match fields[3] {
                        "live" => &mut entry.0,
                        "coop" => &mut entry.1,
                        _ => return Err(err(line, "transfer kind must be live or coop")),
                    };
                    target.insert(key, syms(&fields[4..])?);
                }
            }
        }
        let scheme = scheme.ok_or_else(|| err(0, "missing scheme record"))?;
        let mut rounds = Vec::new();
        let mut bandwidth = Vec::new();
        for (idx, (failed, helpers, bw)) in summaries.into_iter().enumerate() {
            let (live, coop) = transfers.remove(&(idx + 1)).unwrap_or_default();
            rounds.push(RepairTranscript { failed, helpers, live, coop, results: vec![] });
            bandwidth.push(bw);
        }
        if let Some(r) = transfers.keys().next() {
            return Err(err(0, &format!("transfers for round {r} without a summary")));
        }
        // Results are what each round restored: the pre-failure state under
        // exact repair, which replay_check verifies independently.
        let mut nodes = initial.clone();
        for tr in &mut rounds {
            let survivors: Vec<NodeContent> = nodes.iter().filter(|c| !tr.failed.contains(&c.node_id)).cloned().collect();
            if let Ok(fresh) = scheme.repair_with_helpers(&tr.failed, &tr.helpers, &survivors) {
                for c in &fresh.results {
                    if let Some(slot) = nodes.get_mut(c.node_id - 1) {
                        *slot = c.clone();
                    }
                }
                tr.results = fresh.results;
            }
        }
        let history: Vec<(Vec<usize>, Vec<usize>)> = rounds.iter().map(|t| (t.failed.clone(), t.helpers.clone())).collect();
        let observation = if history.is_empty() {
            scheme.observation_from_history(&e1, &[], &[])?
        } else {
            scheme.observation_from_history(&e1, &e2, &history)?
        };
        let trace = SimTrace { params: *scheme.params(), e1, e2, initial, rounds, bandwidth, final_nodes, observation };
        Ok((scheme, trace))
    }
}
