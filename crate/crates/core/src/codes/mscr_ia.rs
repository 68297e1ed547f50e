//! MSCR code for `k = t = 2`, `n = d + 2`, over `GF(n - 1)`.
//!
//! Node 1 stores `a`, node 2 stores `b` and the `i`-th redundancy node
//! stores `a + B_i b`, all of length `alpha = n - 2`. The file is
//! `a = r`, `b = r + s` for one eavesdropped node, and the same with the last
//! entry of `b` replaced by an extra random symbol for one eavesdropped
//! repair. With no eavesdropper `(a, b)` is the secret itself.
//!
//! Repair of a pair `(p, q)` works after the change of variables
//! `A = content(p)`, `B = content(q)`, in which every helper stores
//! `P_h A + Q_h B`. Helper `h` sends `z Q_h^-1` of its content to `p`, so
//! the interference on `B` is aligned along `z`, and `z' P_h^-1` to `q`. Each
//! newcomer forwards one combination of what it got, chosen so that the
//! partner is left with `alpha + 1` independent equations whose interference
//! stays on that single direction.
//!
//! Every node `p` owns a fixed functional `phi_p` outside its content, and
//! `z` is read off `phi_p` for whichever partner `p` is repaired with. The
//! downloads of `p` therefore always span `content(p) + phi_p`, and an
//! eavesdropper on `p` sees the same `alpha + 1` dimensions over any number
//! of repairs.
//!
//! The diagonal `B_i = diag(w^((i-1+s) mod alpha))` is tried first. It is
//! rejected when some pair cannot be repaired or when an admissible
//! eavesdropper learns something, in which case general `B_i` are drawn from
//! a fixed-seed stream until all conditions hold.

use std::collections::{BTreeMap, HashMap};

use crate::field::{apply, combine, prime_power, solve_linear, Elem, ExtField, Field, Linear, Matrix};
use crate::rng::SymbolRng;

use super::{CodeError, RepairOutput, SchemeParams, Segment, Store};

const SEARCH_SEED: u64 = 0x1a_5eed;
const MAX_TRIALS: usize = 4000;
/// Beyond this the search over `B_i` stops being interactive.
const MAX_N: usize = 6;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Case {
    Open,
    Stored,
    Repair,
}

/// Fixed vectors for repairing one unordered pair.
#[derive(Clone, Debug)]
struct PairPlan {
    /// `(helper, newcomer)` to the vector applied to the helper's content.
    live: BTreeMap<(usize, usize), Vec<Elem>>,
    /// `(from, to)` to coefficients over `from`'s live downloads, in helper order.
    coop: BTreeMap<(usize, usize), Vec<Elem>>,
    /// Newcomer to the matrix taking `[live.., coop]` to its content.
    decode: BTreeMap<usize, Matrix>,
}

#[derive(Clone, Debug)]
pub struct MscrIa {
    n: usize,
    alpha: usize,
    case: Case,
    ext: ExtField,
    b: Vec<Matrix>,
    diagonal: bool,
    gens: Vec<Matrix>,
    file: Matrix,
    file_inv: Matrix,
    plans: BTreeMap<(usize, usize), PairPlan>,
}

impl MscrIa {
    pub fn new(p: &SchemeParams) -> Result<Self, CodeError> {
        let SchemeParams { n, k, d, t, l1, l2, .. } = *p;
        if k != 2 || t != 2 || n != d + t {
            return Err(CodeError::InvalidParams(format!(
                "mscr-ia requires k = t = 2 and n = d + 2, got n={n} k={k} d={d} t={t}"
            )));
        }
        if n > MAX_N {
            return Err(CodeError::InvalidParams(format!("mscr-ia is supported for n <= {MAX_N}, got n={n}")));
        }
        let (prime, m) = prime_power(n as u64 - 1)
            .ok_or_else(|| CodeError::InvalidParams(format!("mscr-ia needs n-1 to be a prime power, got {}", n - 1)))?;
        let ext = ExtField::new(prime, m).map_err(|e| CodeError::InvalidParams(e.to_string()))?;
        let alpha = n - 2;
        let case = match (l1, l2) {
            (0, 0) => Case::Open,
            (1, 0) => Case::Stored,
            _ => Case::Repair,
        };
        let file = file_matrix(&ext, alpha, case);
        let file_inv = file.inverse(&ext).expect("file map is invertible");
        let r_len = rand_len(alpha, case);

        let mut rng = SymbolRng::new(SEARCH_SEED);
        for trial in 0..MAX_TRIALS {
            let b = if trial == 0 { diagonal_b(&ext, n) } else { random_b(&ext, alpha, &mut rng) };
            let gens = generators(&ext, &b);
            if let Some(plans) = plan_all(&ext, &gens, &file, r_len, case) {
                return Ok(MscrIa { n, alpha, case, ext, b, diagonal: trial == 0, gens, file, file_inv, plans });
            }
        }
        Err(CodeError::InvalidParams(format!("no repairable mscr-ia code found over GF({}) for n={n}", n - 1)))
    }

    pub fn field(&self) -> &ExtField {
        &self.ext
    }

    pub fn file_size(&self) -> usize {
        2 * self.alpha
    }

    pub fn secret_len(&self) -> usize {
        self.file_size() - rand_len(self.alpha, self.case)
    }

    pub fn layout(&self) -> Vec<Segment> {
        vec![Segment { name: "share", len: self.alpha }]
    }

    /// The redundancy matrices `B_1..B_alpha`.
    pub fn b_matrices(&self) -> &[Matrix] {
        &self.b
    }

    /// Whether the diagonal `B_i` were kept.
    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn encode<V: Linear>(&self, c: &[V]) -> Vec<Vec<V>> {
        let x = apply(&self.ext, &self.file, c);
        self.gens.iter().map(|g| apply(&self.ext, g, &x)).collect()
    }

    pub(crate) fn repair<V: Linear>(&self, failed: &[usize], helpers: &[usize], store: &Store<V>) -> RepairOutput<V> {
        let f = &self.ext;
        let plan = &self.plans[&(failed[0], failed[1])];
        let mut live = Vec::new();
        let mut got: BTreeMap<usize, Vec<V>> = BTreeMap::new();
        for &i in failed {
            for &h in helpers {
                let sym = combine(f, &plan.live[&(h, i)], store[&h]);
                got.entry(i).or_default().push(sym.clone());
                live.push(((h, i), vec![sym]));
            }
        }
        let mut coop = Vec::new();
        for &from in failed {
            for &to in failed.iter().filter(|&&to| to != from) {
                coop.push(((from, to), vec![combine(f, &plan.coop[&(from, to)], &got[&from])]));
            }
        }
        let results = failed
            .iter()
            .map(|&i| {
                let mut eqs = got[&i].clone();
                eqs.extend(coop.iter().filter(|((_, to), _)| *to == i).map(|(_, v)| v[0].clone()));
                (i, apply(f, &plan.decode[&i], &eqs))
            })
            .collect();
        RepairOutput { live, coop, results }
    }

    /// Recovers `c` from exactly two nodes.
    pub fn reconstruct(&self, nodes: &[(usize, &[Elem])]) -> Result<Vec<Elem>, CodeError> {
        let f = &self.ext;
        let (p, cp) = nodes[0];
        let (q, cq) = nodes[1];
        let pair = stack(&self.gens[p - 1], &self.gens[q - 1]);
        let inv = pair.inverse(f).expect("every pair of nodes is MDS");
        let y: Vec<Elem> = cp.iter().chain(cq).copied().collect();
        let x = inv.mul_vec(f, &y);
        debug_assert_eq!(self.n, self.gens.len());
        Ok(self.file_inv.mul_vec(f, &x))
    }
}

fn rand_len(alpha: usize, case: Case) -> usize {
    match case {
        Case::Open => 0,
        Case::Stored => alpha,
        Case::Repair => alpha + 1,
    }
}

/// The map from `c = (r || u)` to `x = (a || b)`.
fn file_matrix(ext: &ExtField, alpha: usize, case: Case) -> Matrix {
    let m = 2 * alpha;
    let mut x = Matrix::zeros(m, m);
    let one = ext.one();
    match case {
        Case::Open => return Matrix::identity(m),
        Case::Stored => {
            for i in 0..alpha {
                x.set(i, i, one);
                x.set(alpha + i, i, one);
                x.set(alpha + i, alpha + i, one);
            }
        }
        Case::Repair => {
            let r_len = alpha + 1;
            for i in 0..alpha {
                x.set(i, i, one);
            }
            for i in 0..alpha - 1 {
                x.set(alpha + i, i, one);
                x.set(alpha + i, r_len + i, one);
            }
            x.set(m - 1, alpha, one);
        }
    }
    x
}

/// `B_i = diag(w^((i-1+s) mod alpha))` with `w` primitive.
pub fn diagonal_b(ext: &ExtField, n: usize) -> Vec<Matrix> {
    let alpha = n - 2;
    let w = ext.primitive_element();
    (1..=alpha)
        .map(|i| {
            let mut b = Matrix::zeros(alpha, alpha);
            for s in 0..alpha {
                b.set(s, s, ext.pow(w, ((i - 1 + s) % alpha) as u64));
            }
            b
        })
        .collect()
}

fn random_b(ext: &ExtField, alpha: usize, rng: &mut SymbolRng) -> Vec<Matrix> {
    (0..alpha)
        .map(|_| {
            let rows = (0..alpha).map(|_| rng.symbols(ext.order(), alpha)).collect();
            Matrix::from_rows(rows, alpha)
        })
        .collect()
}

/// Per-node maps `x -> content`: `[I 0]`, `[0 I]`, then `[I B_i]`.
fn generators(ext: &ExtField, b: &[Matrix]) -> Vec<Matrix> {
    let alpha = b.len();
    let id = Matrix::identity(alpha);
    let zero = Matrix::zeros(alpha, alpha);
    let _ = ext;
    let mut out = vec![id.hstack(&zero), zero.hstack(&id)];
    out.extend(b.iter().map(|bi| id.hstack(bi)));
    out
}

fn stack(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = a.clone();
    for r in 0..b.rows() {
        out.push_row(b.row(r));
    }
    out
}

fn rows_matrix(rows: &[Vec<Elem>], cols: usize) -> Matrix {
    Matrix::from_rows(rows.to_vec(), cols)
}

fn vec_mat(ext: &ExtField, v: &[Elem], m: &Matrix) -> Vec<Elem> {
    m.transpose().mul_vec(ext, v)
}

fn lin_comb(ext: &ExtField, coeffs: &[Elem], rows: &[Vec<Elem>]) -> Vec<Elem> {
    let mut out = vec![ext.zero(); rows[0].len()];
    for (&c, row) in coeffs.iter().zip(rows) {
        for (o, &v) in out.iter_mut().zip(row) {
            *o = ext.add(*o, ext.mul(c, v));
        }
    }
    out
}

/// Nonzero vectors of length `len`, optionally only those whose first
/// nonzero entry is one.
fn vectors(ext: &ExtField, len: usize, projective: bool) -> Vec<Vec<Elem>> {
    let q = ext.order();
    let total = q.pow(len as u32);
    (1..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let v = idx % q;
                    idx /= q;
                    Elem(v)
                })
                .collect::<Vec<Elem>>()
        })
        .filter(|v| !projective || v.iter().find(|e| !e.is_zero()) == Some(&Elem::ONE))
        .collect()
}

fn plan_all(ext: &ExtField, gens: &[Matrix], file: &Matrix, r_len: usize, case: Case) -> Option<BTreeMap<(usize, usize), PairPlan>> {
    let n = gens.len();
    let alpha = gens[0].rows();
    for p in 0..n {
        for q in p + 1..n {
            if !stack(&gens[p], &gens[q]).is_invertible(ext) {
                return None;
            }
        }
    }
    if case == Case::Stored {
        for g in gens {
            if g.mul(ext, file).col_range(0, r_len).rank(ext) < alpha {
                return None;
            }
        }
    }
    // Candidate side functionals per node: one representative of each
    // projective class outside the node's row space.
    let zero = vec![ext.zero(); alpha];
    let mut cands: Vec<Vec<Vec<Elem>>> = Vec::with_capacity(n);
    for (idx, g) in gens.iter().enumerate() {
        let list: Vec<Vec<Elem>> = vectors(ext, alpha, true)
            .into_iter()
            .map(|w| if idx == 1 { [w, zero.clone()].concat() } else { [zero.clone(), w].concat() })
            .filter(|phi| {
                if case != Case::Repair {
                    return true;
                }
                let mut rows = g.clone();
                rows.push_row(phi);
                let over_c = rows.mul(ext, file);
                over_c.rank(ext) == over_c.col_range(0, r_len).rank(ext)
            })
            .collect();
        if list.is_empty() {
            return None;
        }
        cands.push(list);
    }

    struct Search<'a> {
        ext: &'a ExtField,
        gens: &'a [Matrix],
        cands: &'a [Vec<Vec<Elem>>],
        memo: HashMap<(usize, usize, usize, usize), Option<PairPlan>>,
    }
    impl Search<'_> {
        fn pair(&mut self, p: usize, i: usize, q: usize, j: usize) -> bool {
            if !self.memo.contains_key(&(p, i, q, j)) {
                let plan = plan_pair(self.ext, self.gens, p + 1, q + 1, &self.cands[p][i], &self.cands[q][j]);
                self.memo.insert((p, i, q, j), plan);
            }
            self.memo[&(p, i, q, j)].is_some()
        }

        fn assign(&mut self, chosen: &mut Vec<usize>) -> bool {
            let p = chosen.len();
            if p == self.gens.len() {
                return true;
            }
            for i in 0..self.cands[p].len() {
                if (0..p).all(|q| self.pair(q, chosen[q], p, i)) {
                    chosen.push(i);
                    if self.assign(chosen) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
    }

    let mut search = Search { ext, gens, cands: &cands, memo: HashMap::new() };
    let mut chosen = Vec::new();
    if !search.assign(&mut chosen) {
        return None;
    }
    let mut plans = BTreeMap::new();
    for p in 0..n {
        for q in p + 1..n {
            let plan = search.memo[&(p, chosen[p], q, chosen[q])].clone().expect("checked during search");
            plans.insert((p + 1, q + 1), plan.clone());
            plans.insert((q + 1, p + 1), plan);
        }
    }
    Some(plans)
}

/// Repair vectors for newcomers `p < q` (1-based) whose downloads span
/// their content plus `phi_p`, respectively `phi_q`.
fn plan_pair(ext: &ExtField, gens: &[Matrix], p: usize, q: usize, phi_p: &[Elem], phi_q: &[Elem]) -> Option<PairPlan> {
    let alpha = gens[0].rows();
    let c = stack(&gens[p - 1], &gens[q - 1]);
    let ci = c.inverse(ext)?;
    // Interference directions: the `B` part of `phi_p` and the `A` part of
    // `phi_q` in the coordinates `(content(p), content(q))`.
    let z = vec_mat(ext, phi_p, &ci)[alpha..].to_vec();
    let zp = vec_mat(ext, phi_q, &ci)[..alpha].to_vec();
    if z.iter().all(|e| e.is_zero()) || zp.iter().all(|e| e.is_zero()) {
        return None;
    }
    let helpers: Vec<usize> = (1..=gens.len()).filter(|&h| h != p && h != q).collect();
    let mut blocks = Vec::new();
    for &h in &helpers {
        let y = gens[h - 1].mul(ext, &ci);
        let ph = y.col_range(0, alpha);
        let qh = y.col_range(alpha, 2 * alpha);
        let (pi, qi) = (ph.inverse(ext)?, qh.inverse(ext)?);
        blocks.push((ph, qh, pi, qi));
    }
    let units = |offset: usize| -> Vec<Vec<Elem>> {
        (0..alpha)
            .map(|j| (0..2 * alpha).map(|c| if c == offset + j { ext.one() } else { ext.zero() }).collect())
            .collect()
    };
    let (units_a, units_b) = (units(0), units(alpha));
    let full = |rows: &[Vec<Elem>], targets: &[Vec<Elem>]| -> bool {
        let rk = rows_matrix(rows, 2 * alpha).rank(ext);
        if rk != alpha + 1 {
            return false;
        }
        let mut with = rows.to_vec();
        with.extend_from_slice(targets);
        rows_matrix(&with, 2 * alpha).rank(ext) == rk
    };
    let aligned = |dir: &[Elem], v: &[Elem]| rows_matrix(&[dir.to_vec(), v.to_vec()], alpha).rank(ext) <= 1;

    let p_vecs: Vec<Vec<Elem>> = blocks.iter().map(|(_, _, _, qi)| vec_mat(ext, &z, qi)).collect();
    let p_rows: Vec<Vec<Elem>> = blocks
        .iter()
        .zip(&p_vecs)
        .map(|((ph, ..), v)| vec_mat(ext, v, ph).into_iter().chain(z.iter().copied()).collect())
        .collect();
    let q_vecs: Vec<Vec<Elem>> = blocks.iter().map(|(_, _, pi, _)| vec_mat(ext, &zp, pi)).collect();
    let q_rows: Vec<Vec<Elem>> = blocks
        .iter()
        .zip(&q_vecs)
        .map(|((_, qh, ..), v)| zp.iter().copied().chain(vec_mat(ext, v, qh)).collect())
        .collect();
    let coeffs = vectors(ext, alpha, false);
    let pick = |own: &[Vec<Elem>], other: &[Vec<Elem>], dir: &[Elem], part: usize, targets: &[Vec<Elem>]| {
        coeffs.iter().find_map(|g| {
            let row = lin_comb(ext, g, other);
            if !aligned(dir, &row[part * alpha..(part + 1) * alpha]) {
                return None;
            }
            let mut rows = own.to_vec();
            rows.push(row);
            full(&rows, targets).then(|| (g.clone(), rows))
        })
    };
    let (gamma, rows_p) = pick(&p_rows, &q_rows, &z, 1, &units_a)?;
    let (delta, rows_q) = pick(&q_rows, &p_rows, &zp, 0, &units_b)?;
    let decode = |rows: &[Vec<Elem>], targets: &[Vec<Elem>]| -> Matrix {
        let a = rows_matrix(rows, 2 * alpha).transpose();
        let out = targets.iter().map(|t| solve_linear(ext, &a, t).expect("target in row span")).collect();
        Matrix::from_rows(out, alpha + 1)
    };
    let mut live = BTreeMap::new();
    for (idx, &h) in helpers.iter().enumerate() {
        live.insert((h, p), p_vecs[idx].clone());
        live.insert((h, q), q_vecs[idx].clone());
    }
    let mut coop = BTreeMap::new();
    coop.insert((q, p), gamma);
    coop.insert((p, q), delta);
    let mut dec = BTreeMap::new();
    dec.insert(p, decode(&rows_p, &units_a));
    dec.insert(q, decode(&rows_q, &units_b));
    Some(PairPlan { live, coop, decode: dec })
}

#[cfg(test)]
mod tests {
    use super::super::{Scheme, SchemeKind};
    use super::*;
    use crate::precode::{Randomness, SecretMessage};

    fn params(n: usize, l1: usize, l2: usize) -> SchemeParams {
        SchemeParams::new(SchemeKind::MscrIa, n, 2, n - 2, 2, l1, l2)
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MscrIa::new(&SchemeParams::new(SchemeKind::MscrIa, 5, 2, 2, 2, 1, 0)).is_err());
        assert!(MscrIa::new(&params(7, 1, 0)).is_err());
        assert!(MscrIa::new(&params(8, 1, 0)).is_err());
    }

    #[test]
    fn sizes() {
        let s = MscrIa::new(&params(4, 1, 0)).unwrap();
        assert_eq!((s.file_size(), s.secret_len()), (4, 2));
        let s = MscrIa::new(&params(5, 0, 1)).unwrap();
        assert_eq!((s.file_size(), s.secret_len()), (6, 2));
        assert_eq!(s.field().order(), 4);
    }

    #[test]
    fn diagonal_redundancy_node() {
        let ext = ExtField::new(3, 1).unwrap();
        let b = diagonal_b(&ext, 4);
        assert_eq!(b[0].get(0, 0), Elem(1));
        assert_eq!(b[0].get(1, 1), Elem(2));
        assert_eq!(b[1].get(0, 0), Elem(2));
        assert_eq!(b[1].get(1, 1), Elem(1));
    }

    #[test]
    fn diagonal_layout_leaks_for_one_stored_node() {
        // Node 3 holds (r1 + (r1 + s1), r2 + 2 (r2 + s2)) = (2 r1 + s1, 2 s2).
        let ext = ExtField::new(3, 1).unwrap();
        let gens = generators(&ext, &diagonal_b(&ext, 4));
        let file = file_matrix(&ext, 2, Case::Stored);
        let node3 = gens[2].mul(&ext, &file);
        assert_eq!(node3.row(1), &[Elem(0), Elem(0), Elem(0), Elem(2)]);
        assert!(plan_all(&ext, &gens, &file, 2, Case::Stored).is_none());
    }

    #[test]
    fn every_pair_repairs_exactly() {
        for (n, l1, l2) in [(4, 1, 0), (4, 0, 1), (5, 1, 0), (5, 0, 1), (4, 0, 0)] {
            let s = Scheme::new(params(n, l1, l2)).unwrap();
            let u = SecretMessage(vec![Elem(1); s.secret_len()]);
            let r = Randomness::new((0..s.rand_len()).map(|i| Elem(i as u64 % s.field().order())).collect());
            let nodes = s.encode(&u, &r).unwrap();
            for p in 1..=n {
                for q in p + 1..=n {
                    let survivors: Vec<_> = nodes.iter().filter(|c| c.node_id != p && c.node_id != q).cloned().collect();
                    let tr = s.repair(&[p, q], &survivors).unwrap();
                    assert_eq!(tr.download(p), n - 1);
                    assert_eq!(tr.results[0], nodes[p - 1]);
                    assert_eq!(tr.results[1], nodes[q - 1]);
                }
            }
        }
    }

    #[test]
    fn repeated_repairs_reveal_nothing() {
        use crate::secrecy::rank_leakage;
        for n in [4, 5] {
            let s = Scheme::new(params(n, 0, 1)).unwrap();
            for e in 1..=n {
                let history: Vec<(Vec<usize>, Vec<usize>)> = (1..=n)
                    .filter(|&o| o != e)
                    .map(|o| {
                        let failed = vec![e.min(o), e.max(o)];
                        let helpers = s.default_helpers(&failed);
                        (failed, helpers)
                    })
                    .collect();
                let obs = s.observation_from_history(&[], &[e], &history).unwrap();
                assert_eq!(rank_leakage(s.field(), &obs).leakage_qunits, 0, "n={n} e2={e}");
                assert_eq!(obs.joint().rank(s.field()), n - 1);
            }
        }
    }
}
