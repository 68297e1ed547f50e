//! MSCR code for `d = k`.
//!
//! The precoded block of `M = kt` symbols is cut into `m_1..m_t` of `k`
//! symbols each, and node `i` stores `m_j . g_i` for every `j`, with `g_i`
//! the Vandermonde column of node `i`.
//!
//! In a repair round each newcomer is assigned one message index. It
//! downloads `m_j . g_h` from each of its `k` helpers, solves for `m_j`, and
//! sends `m_j . g_f` to every other newcomer `f`. Newcomer `f` takes index
//! `(f - 1) mod t` when those residues are distinct over the failed set,
//! and otherwise its position in the sorted failed set. The first rule
//! keeps a node's index fixed across rounds.

use crate::field::{apply, combine, Elem, ExtField, Field, Linear, Matrix};
use crate::precode::Precoder;

use super::{binary_field_for, canonical_points, CodeError, RepairOutput, SchemeParams, Segment, Store};

#[derive(Clone, Debug)]
pub struct MscrDk {
    n: usize,
    k: usize,
    t: usize,
    ms: usize,
    precoded: bool,
    precoder: Precoder,
    node_points: Vec<Elem>,
}

impl MscrDk {
    pub fn new(p: &SchemeParams, precoded: bool) -> Result<Self, CodeError> {
        let SchemeParams { n, k, d, t, l1, l2, .. } = *p;
        if d != k {
            return Err(CodeError::InvalidParams(format!("{} requires d = k, got d={d} k={k}", p.kind)));
        }
        if l2 >= t && l1 + l2 > 0 {
            return Err(CodeError::PositiveSecrecyImpossible);
        }
        let m_total = k * t;
        let ms = (k - l1 - l2) * (t - l2);
        let ext = binary_field_for(m_total.max(n))?;
        let node_points = canonical_points(&ext, n);
        let precoder = Precoder::new(ext, m_total)?;
        Ok(MscrDk { n, k, t, ms, precoded, precoder, node_points })
    }

    pub fn field(&self) -> &ExtField {
        self.precoder.field()
    }

    pub fn file_size(&self) -> usize {
        self.k * self.t
    }

    pub fn secret_len(&self) -> usize {
        self.ms
    }

    pub fn layout(&self) -> Vec<Segment> {
        vec![Segment { name: "share", len: self.t }]
    }

    fn column(&self, i: usize) -> Vec<Elem> {
        let f = self.field();
        let mut out = Vec::with_capacity(self.k);
        let mut acc = Elem::ONE;
        for _ in 0..self.k {
            out.push(acc);
            acc = f.mul(acc, self.node_points[i - 1]);
        }
        out
    }

    /// The block `x`: precoded, or for the insecure variant `(u || r)` as is.
    fn block<V: Linear>(&self, c: &[V]) -> Vec<V> {
        if self.precoded {
            self.precoder.encode(c)
        } else {
            let r_len = self.file_size() - self.ms;
            c[r_len..].iter().chain(&c[..r_len]).cloned().collect()
        }
    }

    fn unblock(&self, x: &[Elem]) -> Vec<Elem> {
        if self.precoded {
            self.precoder.decode(x)
        } else {
            x[self.ms..].iter().chain(&x[..self.ms]).copied().collect()
        }
    }

    pub fn encode<V: Linear>(&self, c: &[V]) -> Vec<Vec<V>> {
        let x = self.block(c);
        let k = self.k;
        (1..=self.n)
            .map(|i| {
                let g = self.column(i);
                (0..self.t).map(|j| combine(self.field(), &g, &x[j * k..(j + 1) * k])).collect()
            })
            .collect()
    }

    /// Message index for each newcomer, in the order of `failed`.
    pub fn message_indices(&self, failed: &[usize]) -> Vec<usize> {
        let residues: Vec<usize> = failed.iter().map(|&f| (f - 1) % self.t).collect();
        let mut sorted = residues.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == failed.len() {
            residues
        } else {
            let mut order: Vec<usize> = failed.to_vec();
            order.sort_unstable();
            failed.iter().map(|f| order.iter().position(|o| o == f).expect("member")).collect()
        }
    }

    pub(crate) fn repair<V: Linear>(&self, failed: &[usize], helpers: &[usize], store: &Store<V>) -> RepairOutput<V> {
        let f = self.field();
        let idx = self.message_indices(failed);
        let vand = Matrix::from_rows(helpers.iter().map(|&h| self.column(h)).collect(), self.k);
        let inv = vand.inverse(f).expect("distinct Vandermonde points");
        let mut live = Vec::new();
        let mut messages = Vec::new();
        for (&i, &j) in failed.iter().zip(&idx) {
            let got: Vec<V> = helpers.iter().map(|&h| store[&h][j].clone()).collect();
            for (&h, v) in helpers.iter().zip(&got) {
                live.push(((h, i), vec![v.clone()]));
            }
            messages.push(apply(f, &inv, &got));
        }
        let mut coop = Vec::new();
        for (a, &from) in failed.iter().enumerate() {
            for &to in failed.iter().filter(|&&to| to != from) {
                coop.push(((from, to), vec![combine(f, &self.column(to), &messages[a])]));
            }
        }
        let results = failed
            .iter()
            .enumerate()
            .map(|(a, &i)| {
                let mut node: Vec<Option<V>> = vec![None; self.t];
                node[idx[a]] = Some(combine(f, &self.column(i), &messages[a]));
                for (b, &from) in failed.iter().enumerate().filter(|&(b, _)| b != a) {
                    let sym = coop.iter().find(|((s, d), _)| *s == from && *d == i).expect("sent").1[0].clone();
                    node[idx[b]] = Some(sym);
                }
                (i, node.into_iter().map(|s| s.expect("every index covered")).collect())
            })
            .collect();
        RepairOutput { live, coop, results }
    }

    /// Recovers `c` from exactly `k` nodes.
    pub fn reconstruct(&self, nodes: &[(usize, &[Elem])]) -> Result<Vec<Elem>, CodeError> {
        let f = self.field();
        let vand = Matrix::from_rows(nodes.iter().map(|&(i, _)| self.column(i)).collect(), self.k);
        let inv = vand.inverse(f).expect("distinct Vandermonde points");
        let mut x = Vec::with_capacity(self.file_size());
        for j in 0..self.t {
            let vals: Vec<Elem> = nodes.iter().map(|&(_, s)| s[j]).collect();
            x.extend(inv.mul_vec(f, &vals));
        }
        Ok(self.unblock(&x))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Scheme, SchemeKind};
    use super::*;
    use crate::precode::SecretMessage;

    fn params(n: usize, k: usize, t: usize, l1: usize, l2: usize) -> SchemeParams {
        SchemeParams::new(SchemeKind::MscrDk, n, k, k, t, l1, l2)
    }

    #[test]
    fn secure_sizes() {
        assert_eq!(MscrDk::new(&params(5, 3, 2, 1, 0), true).unwrap().secret_len(), 4);
        assert_eq!(MscrDk::new(&params(4, 2, 2, 0, 1), true).unwrap().secret_len(), 1);
        assert_eq!(MscrDk::new(&params(4, 3, 1, 0, 1), true).unwrap_err(), CodeError::PositiveSecrecyImpossible);
        assert_eq!(MscrDk::new(&params(4, 2, 2, 0, 0), true).unwrap().secret_len(), 4);
    }

    #[test]
    fn indices_follow_residues_when_distinct() {
        let s = MscrDk::new(&params(7, 3, 3, 0, 0), true).unwrap();
        assert_eq!(s.message_indices(&[2, 3, 4]), vec![1, 2, 0]);
        assert_eq!(s.message_indices(&[1, 4, 5]), vec![0, 1, 2]);
    }

    #[test]
    fn repair_downloads_n4() {
        let s = Scheme::new(params(4, 2, 2, 0, 1)).unwrap();
        let nodes = s.encode_seeded(&SecretMessage(vec![Elem(7)]), 1).unwrap();
        let tr = s.repair(&[1, 2], &nodes[2..]).unwrap();
        assert_eq!(tr.download(1), 3);
        assert_eq!(tr.results, nodes[..2].to_vec());
    }
}
