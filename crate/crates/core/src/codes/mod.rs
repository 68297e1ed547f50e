//! Secure cooperative regenerating codes.
//!
//! Every construction is linear in the coefficient vector `c = (r || u)`.
//! Encoding and repair are written once over [`Linear`] values: run on
//! [`Elem`] they move real symbols, run on [`LinForm`] they yield each
//! symbol's coefficient row, which is what the observation matrix is built
//! from.

mod mbcr_bivariate;
mod mbcr_exact;
mod mscr_dk;
mod mscr_ia;
pub mod wire;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{Elem, ExtField, Field, LinForm, Matrix};
use crate::precode::{PrecodeError, Randomness, SecretMessage};

pub use mbcr_bivariate::MbcrBivariate;
pub use mbcr_exact::MbcrExact;
pub use mscr_dk::MscrDk;
pub use mscr_ia::MscrIa;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    MbcrExact,
    MbcrBivariate,
    MscrIa,
    MscrDk,
    /// The `MscrDk` layout with the secret stored unprecoded. Insecure by
    /// design; used as a negative control.
    PlainDk,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] =
        [SchemeKind::MbcrExact, SchemeKind::MbcrBivariate, SchemeKind::MscrIa, SchemeKind::MscrDk, SchemeKind::PlainDk];

    pub fn tag(self) -> u8 {
        match self {
            SchemeKind::MbcrExact => 1,
            SchemeKind::MbcrBivariate => 2,
            SchemeKind::MscrIa => 3,
            SchemeKind::MscrDk => 4,
            SchemeKind::PlainDk => 5,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.tag() == tag)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::MbcrExact => "mbcr-exact",
            SchemeKind::MbcrBivariate => "mbcr-bivariate",
            SchemeKind::MscrIa => "mscr-ia",
            SchemeKind::MscrDk => "mscr-dk",
            SchemeKind::PlainDk => "plain-dk",
        }
    }

    pub fn is_mbcr(self) -> bool {
        matches!(self, SchemeKind::MbcrExact | SchemeKind::MbcrBivariate)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == norm || k.name().replace('-', "") == norm)
            .ok_or_else(|| format!("unknown scheme `{s}` (expected one of mbcr-exact, mbcr-bivariate, mscr-ia, mscr-dk, plain-dk)"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchemeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub t: usize,
    pub l1: usize,
    pub l2: usize,
    pub kind: SchemeKind,
}

impl SchemeParams {
    pub fn new(kind: SchemeKind, n: usize, k: usize, d: usize, t: usize, l1: usize, l2: usize) -> Self {
        SchemeParams { n, k, d, t, l1, l2, kind }
    }

    /// Checks the constraints shared by all constructions.
    pub fn validate(&self) -> Result<(), CodeError> {
        let SchemeParams { n, k, d, t, l1, l2, .. } = *self;
        let bad = |msg: String| Err(CodeError::InvalidParams(msg));
        if k == 0 || k > d || d >= n {
            return bad(format!("need 0 < k <= d < n, got n={n} k={k} d={d}"));
        }
        if t == 0 || t > n - d {
            return bad(format!("need 1 <= t <= n-d, got t={t} with n-d={}", n - d));
        }
        if l1 + l2 >= k {
            return bad(format!("need l1+l2 < k, got l1={l1} l2={l2} k={k}"));
        }
        if n > u16::MAX as usize {
            return bad(format!("n={n} is too large"));
        }
        Ok(())
    }
}

impl fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} k={} d={} t={} l1={} l2={}",
            self.kind, self.n, self.k, self.d, self.t, self.l1, self.l2
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no positive secure file size is achievable (l2 >= t)")]
    PositiveSecrecyImpossible,
    #[error("secret has {got} symbols, expected {expected}")]
    SecretLength { expected: usize, got: usize },
    #[error("randomness has {got} symbols, expected {expected}")]
    RandomnessLength { expected: usize, got: usize },
    #[error("symbol {0:#x} is outside the field")]
    OutOfRange(u64),
    #[error("need {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },
    #[error("node {0} appears more than once")]
    DuplicateNode(usize),
    #[error("node id {0} is out of range")]
    UnknownNode(usize),
    #[error("node {node} holds {got} symbols, expected {expected}")]
    ContentLength { node: usize, expected: usize, got: usize },
    #[error("expected {expected} failed nodes, got {got}")]
    FailureCount { expected: usize, got: usize },
    #[error("need {needed} surviving helpers, only {got} available")]
    InsufficientSurvivors { needed: usize, got: usize },
    #[error("invalid helper set: {0}")]
    InvalidHelpers(String),
    #[error("node {0} is eavesdropped as both E1 and E2")]
    EavesdropperOverlap(usize),
    #[error("E2 node {0} was never repaired")]
    NotRepaired(usize),
    #[error(transparent)]
    Precode(#[from] PrecodeError),
}

/// A named run of symbols inside a node's storage.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub name: &'static str,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeContent {
    /// 1-based node id.
    pub node_id: usize,
    pub symbols: Vec<Elem>,
    pub layout: Vec<Segment>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransferKind {
    Live,
    Coop,
}

impl TransferKind {
    pub fn name(self) -> &'static str {
        match self {
            TransferKind::Live => "live",
            TransferKind::Coop => "coop",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairTranscript {
    pub failed: Vec<usize>,
    pub helpers: Vec<usize>,
    /// `(helper, newcomer)` to the `beta` symbols sent.
    pub live: BTreeMap<(usize, usize), Vec<Elem>>,
    /// `(sender, receiver)` between newcomers, `beta'` symbols each.
    pub coop: BTreeMap<(usize, usize), Vec<Elem>>,
    pub results: Vec<NodeContent>,
}

impl RepairTranscript {
    /// Symbols downloaded by `newcomer`.
    pub fn download(&self, newcomer: usize) -> usize {
        let live: usize = self.live.iter().filter(|((_, dst), _)| *dst == newcomer).map(|(_, v)| v.len()).sum();
        let coop: usize = self.coop.iter().filter(|((_, dst), _)| *dst == newcomer).map(|(_, v)| v.len()).sum();
        live + coop
    }

    pub fn total_bandwidth(&self) -> usize {
        self.live.values().chain(self.coop.values()).map(Vec::len).sum()
    }
}

/// Where an observed symbol came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RowSource {
    Stored { node: usize, index: usize },
    Live { repair: usize, helper: usize, newcomer: usize, index: usize },
    Coop { repair: usize, from: usize, to: usize, index: usize },
}

/// The eavesdropper view `e = A_u u + A_r r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationMatrix {
    pub a_u: Matrix,
    pub a_r: Matrix,
    pub labels: Vec<RowSource>,
}

impl ObservationMatrix {
    pub fn rows(&self) -> usize {
        self.labels.len()
    }

    pub fn from_forms(forms: Vec<LinForm>, labels: Vec<RowSource>, r_len: usize, total: usize) -> Self {
        let full = Matrix::from_rows(forms.into_iter().map(|f| f.0).collect(), total);
        ObservationMatrix { a_r: full.col_range(0, r_len), a_u: full.col_range(r_len, total), labels }
    }

    /// `[A_u | A_r]`.
    pub fn joint(&self) -> Matrix {
        self.a_u.hstack(&self.a_r)
    }

    pub fn evaluate<F: Field>(&self, f: &F, u: &[Elem], r: &[Elem]) -> Vec<Elem> {
        let eu = self.a_u.mul_vec(f, u);
        let er = self.a_r.mul_vec(f, r);
        eu.into_iter().zip(er).map(|(a, b)| f.add(a, b)).collect()
    }

    /// Stacks the rows of `other` below these.
    pub fn extend(&mut self, other: &ObservationMatrix) {
        for r in 0..other.rows() {
            self.a_u.push_row(other.a_u.row(r));
            self.a_r.push_row(other.a_r.row(r));
        }
        self.labels.extend_from_slice(&other.labels);
    }
}

/// Output of one generic repair round.
pub(crate) struct RepairOutput<V> {
    pub live: Vec<((usize, usize), Vec<V>)>,
    pub coop: Vec<((usize, usize), Vec<V>)>,
    pub results: Vec<(usize, Vec<V>)>,
}

/// Node storage indexed by 1-based id.
pub(crate) type Store<'a, V> = BTreeMap<usize, &'a [V]>;

macro_rules! dispatch {
    ($self:expr, $s:ident => $body:expr) => {
        match &$self.inner {
            Inner::MbcrExact($s) => $body,
            Inner::MbcrBivariate($s) => $body,
            Inner::MscrIa($s) => $body,
            Inner::MscrDk($s) => $body,
        }
    };
}

#[derive(Clone, Debug)]
enum Inner {
    MbcrExact(MbcrExact),
    MbcrBivariate(MbcrBivariate),
    MscrIa(MscrIa),
    MscrDk(MscrDk),
}

/// A fully parameterized code.
#[derive(Clone, Debug)]
pub struct Scheme {
    params: SchemeParams,
    inner: Inner,
}

impl Scheme {
    pub fn new(params: SchemeParams) -> Result<Self, CodeError> {
        params.validate()?;
        let inner = match params.kind {
            SchemeKind::MbcrExact => Inner::MbcrExact(MbcrExact::new(&params)?),
            SchemeKind::MbcrBivariate => Inner::MbcrBivariate(MbcrBivariate::new(&params)?),
            SchemeKind::MscrIa => Inner::MscrIa(MscrIa::new(&params)?),
            SchemeKind::MscrDk => Inner::MscrDk(MscrDk::new(&params, true)?),
            SchemeKind::PlainDk => Inner::MscrDk(MscrDk::new(&params, false)?),
        };
        Ok(Scheme { params, inner })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn field(&self) -> &ExtField {
        dispatch!(self, s => s.field())
    }

    pub fn alpha(&self) -> usize {
        self.layout().iter().map(|s| s.len).sum()
    }

    /// Symbols per helper link.
    pub fn beta(&self) -> usize {
        if self.params.kind.is_mbcr() {
            2
        } else {
            1
        }
    }

    /// Symbols per newcomer-to-newcomer link.
    pub fn beta_prime(&self) -> usize {
        1
    }

    pub fn gamma(&self) -> usize {
        self.params.d * self.beta() + (self.params.t - 1) * self.beta_prime()
    }

    /// File size `M`.
    pub fn file_size(&self) -> usize {
        dispatch!(self, s => s.file_size())
    }

    /// Secure file size `M^s`.
    pub fn secret_len(&self) -> usize {
        dispatch!(self, s => s.secret_len())
    }

    pub fn rand_len(&self) -> usize {
        self.file_size() - self.secret_len()
    }

    pub fn layout(&self) -> Vec<Segment> {
        dispatch!(self, s => s.layout())
    }

    /// Helpers used when none are specified: the `d` lowest-id survivors.
    pub fn default_helpers(&self, failed: &[usize]) -> Vec<usize> {
        (1..=self.params.n).filter(|i| !failed.contains(i)).take(self.params.d).collect()
    }

    fn check_symbols<'a>(&self, it: impl IntoIterator<Item = &'a Elem>) -> Result<(), CodeError> {
        let f = self.field();
        for v in it {
            if !f.contains(*v) {
                return Err(CodeError::OutOfRange(v.0));
            }
        }
        Ok(())
    }

    fn coeffs(&self, u: &SecretMessage, r: &Randomness) -> Result<Vec<Elem>, CodeError> {
        if u.0.len() != self.secret_len() {
            return Err(CodeError::SecretLength { expected: self.secret_len(), got: u.0.len() });
        }
        if r.len() != self.rand_len() {
            return Err(CodeError::RandomnessLength { expected: self.rand_len(), got: r.len() });
        }
        self.check_symbols(u.0.iter().chain(&r.symbols))?;
        Ok(r.symbols.iter().chain(&u.0).copied().collect())
    }

    fn wrap(&self, node_id: usize, symbols: Vec<Elem>) -> NodeContent {
        NodeContent { node_id, symbols, layout: self.layout() }
    }

    pub fn encode(&self, u: &SecretMessage, r: &Randomness) -> Result<Vec<NodeContent>, CodeError> {
        let c = self.coeffs(u, r)?;
        let nodes = dispatch!(self, s => s.encode(&c));
        Ok(nodes.into_iter().enumerate().map(|(i, v)| self.wrap(i + 1, v)).collect())
    }

    /// Draws `r` from `seed` and encodes.
    pub fn encode_seeded(&self, u: &SecretMessage, seed: u64) -> Result<Vec<NodeContent>, CodeError> {
        let r = Randomness::from_seed(self.field().order(), self.rand_len(), seed);
        self.encode(u, &r)
    }

    /// Each node's stored symbols as rows over `c = (r || u)`.
    pub fn stored_forms(&self) -> Vec<Vec<LinForm>> {
        let m = self.file_size();
        let c: Vec<LinForm> = (0..m).map(|i| LinForm::unit(m, i)).collect();
        dispatch!(self, s => s.encode(&c))
    }

    fn check_contents(&self, contents: &[NodeContent]) -> Result<(), CodeError> {
        let alpha = self.alpha();
        let mut seen = BTreeSet::new();
        for c in contents {
            if c.node_id == 0 || c.node_id > self.params.n {
                return Err(CodeError::UnknownNode(c.node_id));
            }
            if !seen.insert(c.node_id) {
                return Err(CodeError::DuplicateNode(c.node_id));
            }
            if c.symbols.len() != alpha {
                return Err(CodeError::ContentLength { node: c.node_id, expected: alpha, got: c.symbols.len() });
            }
            self.check_symbols(&c.symbols)?;
        }
        Ok(())
    }

    /// Recovers `(u, r)` from any `k` nodes (extra nodes beyond the `k`
    /// lowest ids are ignored).
    pub fn reconstruct_full(&self, contents: &[NodeContent]) -> Result<(SecretMessage, Randomness), CodeError> {
        self.check_contents(contents)?;
        if contents.len() < self.params.k {
            return Err(CodeError::TooFewNodes { needed: self.params.k, got: contents.len() });
        }
        let mut sorted: Vec<&NodeContent> = contents.iter().collect();
        sorted.sort_by_key(|c| c.node_id);
        let chosen: Vec<(usize, &[Elem])> =
            sorted.iter().take(self.params.k).map(|c| (c.node_id, c.symbols.as_slice())).collect();
        let mut c = dispatch!(self, s => s.reconstruct(&chosen))?;
        let u = c.split_off(self.rand_len());
        Ok((SecretMessage(u), Randomness::new(c)))
    }

    pub fn reconstruct(&self, contents: &[NodeContent]) -> Result<SecretMessage, CodeError> {
        self.reconstruct_full(contents).map(|(u, _)| u)
    }

    fn check_repair(&self, failed: &[usize], helpers: &[usize]) -> Result<(Vec<usize>, Vec<usize>), CodeError> {
        let SchemeParams { n, d, t, .. } = self.params;
        let mut f = failed.to_vec();
        f.sort_unstable();
        f.dedup();
        if f.len() != failed.len() {
            return Err(CodeError::DuplicateNode(failed[0]));
        }
        if f.len() != t {
            return Err(CodeError::FailureCount { expected: t, got: f.len() });
        }
        if let Some(&bad) = f.iter().find(|&&i| i == 0 || i > n) {
            return Err(CodeError::UnknownNode(bad));
        }
        let mut h = helpers.to_vec();
        h.sort_unstable();
        h.dedup();
        if h.len() != helpers.len() || h.len() != d {
            return Err(CodeError::InvalidHelpers(format!("need {d} distinct helpers, got {helpers:?}")));
        }
        if let Some(&bad) = h.iter().find(|&&i| i == 0 || i > n || f.contains(&i)) {
            return Err(CodeError::InvalidHelpers(format!("node {bad} cannot help")));
        }
        Ok((f, h))
    }

    /// Repairs `failed` from the default helpers.
    pub fn repair(&self, failed: &[usize], survivors: &[NodeContent]) -> Result<RepairTranscript, CodeError> {
        let available: Vec<usize> = {
            let mut ids: Vec<usize> = survivors.iter().map(|c| c.node_id).filter(|i| !failed.contains(i)).collect();
            ids.sort_unstable();
            ids
        };
        if available.len() < self.params.d {
            return Err(CodeError::InsufficientSurvivors { needed: self.params.d, got: available.len() });
        }
        let helpers: Vec<usize> = available.into_iter().take(self.params.d).collect();
        self.repair_with_helpers(failed, &helpers, survivors)
    }

    pub fn repair_with_helpers(
        &self,
        failed: &[usize],
        helpers: &[usize],
        survivors: &[NodeContent],
    ) -> Result<RepairTranscript, CodeError> {
        let (failed, helpers) = self.check_repair(failed, helpers)?;
        self.check_contents(survivors)?;
        let store: Store<Elem> = survivors.iter().map(|c| (c.node_id, c.symbols.as_slice())).collect();
        let missing: Vec<usize> = helpers.iter().copied().filter(|h| !store.contains_key(h)).collect();
        if !missing.is_empty() {
            return Err(CodeError::InsufficientSurvivors { needed: helpers.len(), got: helpers.len() - missing.len() });
        }
        let out = dispatch!(self, s => s.repair(&failed, &helpers, &store));
        Ok(RepairTranscript {
            live: out.live.into_iter().collect(),
            coop: out.coop.into_iter().collect(),
            results: out.results.into_iter().map(|(i, v)| self.wrap(i, v)).collect(),
            failed,
            helpers,
        })
    }

    /// The symbolic counterpart of one repair: transfers and results as rows
    /// over `c`.
    pub(crate) fn repair_forms(&self, failed: &[usize], helpers: &[usize]) -> Result<RepairOutput<LinForm>, CodeError> {
        let (failed, helpers) = self.check_repair(failed, helpers)?;
        let forms = self.stored_forms();
        let store: Store<LinForm> = forms.iter().enumerate().map(|(i, v)| (i + 1, v.as_slice())).collect();
        Ok(dispatch!(self, s => s.repair(&failed, &helpers, &store)))
    }

    /// Eavesdropper view for stored content of `e1` and stored content plus
    /// every repair download of `e2` across `transcripts`.
    pub fn observation_matrix(
        &self,
        e1: &[usize],
        e2: &[usize],
        transcripts: &[RepairTranscript],
    ) -> Result<ObservationMatrix, CodeError> {
        let history: Vec<(Vec<usize>, Vec<usize>)> =
            transcripts.iter().map(|t| (t.failed.clone(), t.helpers.clone())).collect();
        self.observation_from_history(e1, e2, &history)
    }

    /// As [`Scheme::observation_matrix`], from `(failed, helpers)` pairs.
    pub fn observation_from_history(
        &self,
        e1: &[usize],
        e2: &[usize],
        history: &[(Vec<usize>, Vec<usize>)],
    ) -> Result<ObservationMatrix, CodeError> {
        let n = self.params.n;
        for &i in e1.iter().chain(e2) {
            if i == 0 || i > n {
                return Err(CodeError::UnknownNode(i));
            }
        }
        if let Some(&i) = e1.iter().find(|i| e2.contains(i)) {
            return Err(CodeError::EavesdropperOverlap(i));
        }
        let stored = self.stored_forms();
        let mut forms = Vec::new();
        let mut labels = Vec::new();
        let mut observed: Vec<usize> = e1.iter().chain(e2).copied().collect();
        observed.sort_unstable();
        observed.dedup();
        for &node in &observed {
            for (index, f) in stored[node - 1].iter().enumerate() {
                forms.push(f.clone());
                labels.push(RowSource::Stored { node, index });
            }
        }
        let mut repaired = BTreeSet::new();
        for (round, (failed, helpers)) in history.iter().enumerate() {
            if !failed.iter().any(|i| e2.contains(i)) {
                continue;
            }
            let out = self.repair_forms(failed, helpers)?;
            for ((helper, newcomer), syms) in &out.live {
                if e2.contains(newcomer) {
                    repaired.insert(*newcomer);
                    for (index, f) in syms.iter().enumerate() {
                        forms.push(f.clone());
                        labels.push(RowSource::Live { repair: round, helper: *helper, newcomer: *newcomer, index });
                    }
                }
            }
            for ((from, to), syms) in &out.coop {
                if e2.contains(to) {
                    for (index, f) in syms.iter().enumerate() {
                        forms.push(f.clone());
                        labels.push(RowSource::Coop { repair: round, from: *from, to: *to, index });
                    }
                }
            }
        }
        if let Some(&i) = e2.iter().find(|i| !repaired.contains(i)) {
            return Err(CodeError::NotRepaired(i));
        }
        Ok(ObservationMatrix::from_forms(forms, labels, self.rand_len(), self.file_size()))
    }
}

/// Index of `j` among the ids `1..=n` other than `i`, in increasing order.
pub(crate) fn other_index(i: usize, j: usize) -> usize {
    debug_assert_ne!(i, j);
    if j < i {
        j - 1
    } else {
        j - 2
    }
}

/// The first `count` powers `1, X, X^2, ..` of the polynomial-basis generator.
pub(crate) fn canonical_points(ext: &ExtField, count: usize) -> Vec<Elem> {
    let x = ext.x();
    let mut out = Vec::with_capacity(count);
    let mut acc = Elem::ONE;
    for _ in 0..count {
        out.push(acc);
        acc = ext.mul(acc, x);
    }
    out
}

/// Smallest power of two `m` with `m >= need`, as a field `GF(2^m)`.
pub(crate) fn binary_field_for(need: usize) -> Result<ExtField, CodeError> {
    let m = need.max(1).next_power_of_two();
    ExtField::new(2, m).map_err(|_| CodeError::InvalidParams(format!("needs GF(2^{m}), beyond the supported 2^32")))
}
