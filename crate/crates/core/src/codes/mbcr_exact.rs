//! Exact MBCR code for `n = d + t`.
//!
//! The precoded block `x` is split in two. The first `nk` symbols are
//! stored `k` per node. The remaining `k(d-k)` symbols feed `d-k` copies of
//! an `(n, k)` Vandermonde code whose `i`-th symbols are the `y`-part of
//! node `i`. The `d` primary symbols `P_i = (x-part, y-part)` of every node
//! are then spread over the other `n-1` nodes through `P_i Phi`, where `Phi`
//! is a `d x (n-1)` Vandermonde matrix with every square minor nonzero.
//!
//! Storage of node `j`: x-segment (`k`), y-segment (`d-k`), z-segment with
//! one symbol `P_i Phi[:, col_i(j)]` per other node `i`, by increasing `i`.

use crate::field::{apply, combine, solve_linear, Elem, ExtField, Field, Linear, Matrix};
use crate::precode::Precoder;
use crate::rng::SymbolRng;

use super::{binary_field_for, canonical_points, other_index, CodeError, RepairOutput, SchemeParams, Segment, Store};

#[derive(Clone, Debug)]
pub struct MbcrExact {
    n: usize,
    k: usize,
    d: usize,
    ms: usize,
    precoder: Precoder,
    /// Evaluation points of the `(n, k)` code, one per node.
    node_points: Vec<Elem>,
    /// `d x (n-1)`.
    phi: Matrix,
    phi_points: Vec<Elem>,
}

impl MbcrExact {
    pub fn new(p: &SchemeParams) -> Result<Self, CodeError> {
        let SchemeParams { n, k, d, t, l1, l2, .. } = *p;
        if n != d + t {
            return Err(CodeError::InvalidParams(format!("mbcr-exact requires n = d + t, got n={n} d={d} t={t}")));
        }
        let m_total = k * (2 * d + t - k);
        let l = l1 + l2;
        let ms = (k - l) * (2 * d + t - k - l);
        let ext = binary_field_for(m_total.max(n))?;
        let node_points = canonical_points(&ext, n);
        let (phi, phi_points) = superregular_vandermonde(&ext, d, n - 1);
        let precoder = Precoder::new(ext, m_total)?;
        Ok(MbcrExact { n, k, d, ms, precoder, node_points, phi, phi_points })
    }

    pub fn field(&self) -> &ExtField {
        self.precoder.field()
    }

    pub fn file_size(&self) -> usize {
        self.precoder.len()
    }

    pub fn secret_len(&self) -> usize {
        self.ms
    }

    pub fn phi_points(&self) -> &[Elem] {
        &self.phi_points
    }

    pub fn layout(&self) -> Vec<Segment> {
        vec![
            Segment { name: "x", len: self.k },
            Segment { name: "y", len: self.d - self.k },
            Segment { name: "z", len: self.n - 1 },
        ]
    }

    fn ext(&self) -> &ExtField {
        self.precoder.field()
    }

    /// Vandermonde column of node `i` for the `(n, k)` code.
    fn node_column(&self, i: usize) -> Vec<Elem> {
        let f = self.ext();
        let mut col = Vec::with_capacity(self.k);
        let mut acc = Elem::ONE;
        for _ in 0..self.k {
            col.push(acc);
            acc = f.mul(acc, self.node_points[i - 1]);
        }
        col
    }

    fn phi_column(&self, c: usize) -> Vec<Elem> {
        self.phi.column(c)
    }

    fn primary<V: Linear>(&self, x: &[V], i: usize) -> Vec<V> {
        let (n, k, d) = (self.n, self.k, self.d);
        let mut p: Vec<V> = x[(i - 1) * k..i * k].to_vec();
        let g = self.node_column(i);
        for j in 0..d - k {
            let start = n * k + j * k;
            p.push(combine(self.ext(), &g, &x[start..start + k]));
        }
        p
    }

    pub fn encode<V: Linear>(&self, c: &[V]) -> Vec<Vec<V>> {
        let x = self.precoder.encode(c);
        let n = self.n;
        let primaries: Vec<Vec<V>> = (1..=n).map(|i| self.primary(&x, i)).collect();
        (1..=n)
            .map(|j| {
                let mut node = primaries[j - 1].clone();
                for i in (1..=n).filter(|&i| i != j) {
                    node.push(combine(self.ext(), &self.phi_column(other_index(i, j)), &primaries[i - 1]));
                }
                node
            })
            .collect()
    }

    /// Position of the z-symbol from source `i` inside node `j`.
    fn z_slot(&self, j: usize, i: usize) -> usize {
        self.d + other_index(j, i)
    }

    pub(crate) fn repair<V: Linear>(&self, failed: &[usize], helpers: &[usize], store: &Store<V>) -> RepairOutput<V> {
        let f = self.ext();
        let mut live = Vec::new();
        let mut primaries = Vec::new();
        for &i in failed {
            let mut first = Vec::with_capacity(helpers.len());
            let mut cols = Vec::with_capacity(helpers.len());
            for &h in helpers {
                let node = store[&h];
                let own = combine(f, &self.phi_column(other_index(h, i)), &node[..self.d]);
                let relayed = node[self.z_slot(h, i)].clone();
                first.push(relayed.clone());
                cols.push(other_index(i, h));
                live.push(((h, i), vec![relayed, own]));
            }
            // first[h] = sum_r P_i[r] Phi[r][cols[h]]
            let sub = self.phi.select_cols(&cols).transpose();
            let inv = sub.inverse(f).expect("square minors of Phi are nonzero");
            primaries.push((i, apply(f, &inv, &first)));
        }
        let mut coop = Vec::new();
        for (j, pj) in &primaries {
            for &i in failed.iter().filter(|&&i| i != *j) {
                coop.push(((*j, i), vec![combine(f, &self.phi_column(other_index(*j, i)), pj)]));
            }
        }
        let results = primaries
            .iter()
            .map(|(i, pi)| {
                let mut node = pi.clone();
                for src in (1..=self.n).filter(|&s| s != *i) {
                    let sym = if let Some(((_, _), v)) = live.iter().find(|((h, dst), _)| *h == src && dst == i) {
                        v[1].clone()
                    } else {
                        coop.iter().find(|((from, to), _)| *from == src && to == i).expect("every source reaches the newcomer").1[0]
                            .clone()
                    };
                    node.push(sym);
                }
                (*i, node)
            })
            .collect();
        RepairOutput { live, coop, results }
    }

    /// Recovers `c` from exactly `k` nodes.
    pub fn reconstruct(&self, nodes: &[(usize, &[Elem])]) -> Result<Vec<Elem>, CodeError> {
        let f = self.ext();
        let (n, k, d) = (self.n, self.k, self.d);
        let mut x = vec![Elem::ZERO; self.file_size()];
        let mut known = vec![false; n + 1];
        for &(i, s) in nodes {
            x[(i - 1) * k..i * k].copy_from_slice(&s[..k]);
            known[i] = true;
        }
        // y-codes: k evaluations each.
        let vand = Matrix::from_rows(nodes.iter().map(|&(i, _)| self.node_column(i)).collect(), k);
        let vinv = vand.inverse(f).expect("distinct Vandermonde points");
        for j in 0..d - k {
            let ys: Vec<Elem> = nodes.iter().map(|&(_, s)| s[k + j]).collect();
            let msg = vinv.mul_vec(f, &ys);
            let start = n * k + j * k;
            x[start..start + k].copy_from_slice(&msg);
        }
        for v in (1..=n).filter(|&v| !known[v]) {
            let yv = self.primary(&x, v)[k..].to_vec();
            let cols: Vec<usize> = nodes.iter().map(|&(i, _)| other_index(v, i)).collect();
            let mut rhs = Vec::with_capacity(k);
            for (&(i, s), &col) in nodes.iter().zip(&cols) {
                let z = s[self.z_slot(i, v)];
                let known_part = (0..d - k).fold(Elem::ZERO, |acc, r| f.add(acc, f.mul(self.phi.get(k + r, col), yv[r])));
                rhs.push(f.sub(z, known_part));
            }
            let a = Matrix::from_rows(cols.iter().map(|&c| (0..k).map(|r| self.phi.get(r, c)).collect()).collect(), k);
            let xv = solve_linear(f, &a, &rhs).expect("square minors of Phi are nonzero");
            x[(v - 1) * k..v * k].copy_from_slice(&xv);
        }
        Ok(self.precoder.decode(&x))
    }
}

/// Every square submatrix nonsingular.
pub(crate) fn is_superregular<F: Field>(f: &F, m: &Matrix) -> bool {
    let (rows, cols) = (m.rows(), m.cols());
    for size in 1..=rows.min(cols) {
        for rs in subsets(rows, size) {
            for cs in subsets(cols, size) {
                if !m.select_rows(&rs).select_cols(&cs).is_invertible(f) {
                    return false;
                }
            }
        }
    }
    true
}

pub(crate) fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// `rows x cols` Vandermonde matrix `Phi[r][c] = phi_c^r` with every square
/// minor nonzero. Tries the canonical points `1, X, .., X^(cols-1)` first,
/// then seeded draws of distinct nonzero points.
fn superregular_vandermonde(ext: &ExtField, rows: usize, cols: usize) -> (Matrix, Vec<Elem>) {
    let candidate = |pts: &[Elem]| Matrix::vandermonde(ext, pts, rows);
    let canonical = canonical_points(ext, cols);
    let m = candidate(&canonical);
    if is_superregular(ext, &m) {
        return (m, canonical);
    }
    let mut rng = SymbolRng::new(0x5eed_0f_9b1);
    loop {
        let mut pts: Vec<Elem> = Vec::with_capacity(cols);
        while pts.len() < cols {
            let p = Elem(1 + rng.below(ext.order() - 1));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let m = candidate(&pts);
        if is_superregular(ext, &m) {
            return (m, pts);
        }
    }
}
