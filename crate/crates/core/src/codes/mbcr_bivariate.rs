//! MBCR code from a bivariate polynomial, for any `n >= d + t`.
//!
//! `F(X, Y) = sum f_ab X^a Y^b` over the monomials `a < k, b < d+t` and
//! `k <= a < d, b < k`. Node `i` stores the row values `F(x_i, y_{i+s})`
//! for `s = 0..d+t-1` and the column values `F(x_{i+s}, y_i)` for
//! `s = 1..d-1`, indices taken cyclically. Row polynomials `f_i(Y)` have
//! degree below `d+t`; column polynomials `g_{y_i}(X)` have degree below `d`.
//!
//! Randomness fills the coefficients with `a < l` or `b < l` (`l = l1+l2`),
//! in lexicographic order of `(a, b)`; the secret fills the rest.

use crate::field::{combine, poly, Elem, ExtField, Field, Linear, Matrix};
use crate::field::is_prime;

use super::{CodeError, RepairOutput, SchemeParams, Segment, Store};

#[derive(Clone, Debug)]
pub struct MbcrBivariate {
    n: usize,
    k: usize,
    d: usize,
    t: usize,
    ext: ExtField,
    /// Monomial `(a, b)` of coefficient `c_i`.
    monomials: Vec<(usize, usize)>,
    ms: usize,
}

impl MbcrBivariate {
    pub fn new(p: &SchemeParams) -> Result<Self, CodeError> {
        let SchemeParams { n, k, d, t, l1, l2, .. } = *p;
        if n < d + t {
            return Err(CodeError::InvalidParams(format!("mbcr-bivariate requires n >= d + t, got n={n} d={d} t={t}")));
        }
        let q = (n as u64 + 1..).find(|&q| is_prime(q)).expect("primes are unbounded");
        let ext = ExtField::prime(q).map_err(|e| CodeError::InvalidParams(e.to_string()))?;
        let l = l1 + l2;
        let mut all = Vec::new();
        for a in 0..d {
            let bmax = if a < k { d + t } else { k };
            for b in 0..bmax {
                all.push((a, b));
            }
        }
        let (mut monomials, secret): (Vec<_>, Vec<_>) = all.into_iter().partition(|&(a, b)| a < l || b < l);
        let ms = secret.len();
        monomials.extend(secret);
        Ok(MbcrBivariate { n, k, d, t, ext, monomials, ms })
    }

    pub fn field(&self) -> &ExtField {
        &self.ext
    }

    pub fn file_size(&self) -> usize {
        self.monomials.len()
    }

    pub fn secret_len(&self) -> usize {
        self.ms
    }

    pub fn monomials(&self) -> &[(usize, usize)] {
        &self.monomials
    }

    pub fn layout(&self) -> Vec<Segment> {
        vec![Segment { name: "row", len: self.d + self.t }, Segment { name: "column", len: self.d - 1 }]
    }

    fn point(&self, i: usize) -> Elem {
        Elem(i as u64)
    }

    /// `i (+) s` on 1-based ids.
    fn shift(&self, i: usize, s: usize) -> usize {
        (i - 1 + s) % self.n + 1
    }

    fn row_ids(&self, i: usize) -> Vec<usize> {
        (0..self.d + self.t).map(|s| self.shift(i, s)).collect()
    }

    /// Ids whose `x` points carry node `i`'s column polynomial values,
    /// starting with `i` itself (the first row value).
    fn column_ids(&self, i: usize) -> Vec<usize> {
        (0..self.d).map(|s| self.shift(i, s)).collect()
    }

    fn eval_at<V: Linear>(&self, c: &[V], x: Elem, y: Elem) -> V {
        let f = &self.ext;
        let coeffs: Vec<Elem> = self.monomials.iter().map(|&(a, b)| f.mul(f.pow(x, a as u64), f.pow(y, b as u64))).collect();
        combine(f, &coeffs, c)
    }

    pub fn encode<V: Linear>(&self, c: &[V]) -> Vec<Vec<V>> {
        (1..=self.n)
            .map(|i| {
                let xi = self.point(i);
                let yi = self.point(i);
                let mut node: Vec<V> = self.row_ids(i).into_iter().map(|j| self.eval_at(c, xi, self.point(j))).collect();
                node.extend((1..self.d).map(|s| self.eval_at(c, self.point(self.shift(i, s)), yi)));
                node
            })
            .collect()
    }

    /// `f_h(y)` from node `h`'s row values.
    fn row_value<V: Linear>(&self, h: usize, node: &[V], y: Elem) -> V {
        let ys: Vec<Elem> = self.row_ids(h).into_iter().map(|j| self.point(j)).collect();
        combine(&self.ext, &poly::lagrange_weights(&self.ext, &ys, y), &node[..self.d + self.t])
    }

    /// `g_{y_h}(x)` from node `h`'s own row value and column values.
    fn column_value<V: Linear>(&self, h: usize, node: &[V], x: Elem) -> V {
        let xs: Vec<Elem> = self.column_ids(h).into_iter().map(|j| self.point(j)).collect();
        let mut vals = vec![node[0].clone()];
        vals.extend_from_slice(&node[self.d + self.t..]);
        combine(&self.ext, &poly::lagrange_weights(&self.ext, &xs, x), &vals)
    }

    pub(crate) fn repair<V: Linear>(&self, failed: &[usize], helpers: &[usize], store: &Store<V>) -> RepairOutput<V> {
        let f = &self.ext;
        let mut live = Vec::new();
        // Per newcomer: (h, f_h(y_i)) and (h, g_{y_h}(x_i)).
        let mut col_evidence: Vec<Vec<(usize, V)>> = Vec::new();
        let mut row_evidence: Vec<Vec<(usize, V)>> = Vec::new();
        for &i in failed {
            let (xi, yi) = (self.point(i), self.point(i));
            let mut ce = Vec::new();
            let mut re = Vec::new();
            for &h in helpers {
                let node = store[&h];
                let a = self.row_value(h, node, yi);
                let b = self.column_value(h, node, xi);
                ce.push((h, a.clone()));
                re.push((h, b.clone()));
                live.push(((h, i), vec![a, b]));
            }
            col_evidence.push(ce);
            row_evidence.push(re);
        }
        // g_{y_j}(x) for newcomer j from its d column evidences.
        let col_weights = |j_idx: usize, x: Elem| {
            let xs: Vec<Elem> = col_evidence[j_idx].iter().map(|(h, _)| self.point(*h)).collect();
            poly::lagrange_weights(f, &xs, x)
        };
        let col_vals: Vec<Vec<V>> = col_evidence.iter().map(|ce| ce.iter().map(|(_, v)| v.clone()).collect()).collect();
        let mut coop = Vec::new();
        for (j_idx, &j) in failed.iter().enumerate() {
            for &i in failed.iter().filter(|&&i| i != j) {
                let v = combine(f, &col_weights(j_idx, self.point(i)), &col_vals[j_idx]);
                coop.push(((j, i), vec![v]));
            }
        }
        let mut results = Vec::new();
        for (i_idx, &i) in failed.iter().enumerate() {
            // Row evidence: helpers, peers, and g_{y_i}(x_i).
            let mut ys: Vec<Elem> = Vec::new();
            let mut vals: Vec<V> = Vec::new();
            for (h, v) in &row_evidence[i_idx] {
                ys.push(self.point(*h));
                vals.push(v.clone());
            }
            for ((from, to), v) in &coop {
                if *to == i {
                    ys.push(self.point(*from));
                    vals.push(v[0].clone());
                }
            }
            ys.push(self.point(i));
            vals.push(combine(f, &col_weights(i_idx, self.point(i)), &col_vals[i_idx]));
            let mut node: Vec<V> = self
                .row_ids(i)
                .into_iter()
                .map(|j| combine(f, &poly::lagrange_weights(f, &ys, self.point(j)), &vals))
                .collect();
            for s in 1..self.d {
                node.push(combine(f, &col_weights(i_idx, self.point(self.shift(i, s))), &col_vals[i_idx]));
            }
            results.push((i, node));
        }
        RepairOutput { live, coop, results }
    }

    /// Recovers `c` from exactly `k` nodes.
    pub fn reconstruct(&self, nodes: &[(usize, &[Elem])]) -> Result<Vec<Elem>, CodeError> {
        let f = &self.ext;
        let (k, d, t) = (self.k, self.d, self.t);
        let mut coef = vec![vec![Elem::ZERO; d + t]; d];
        // Row polynomials, coefficients in Y.
        let rows: Vec<Vec<Elem>> = nodes
            .iter()
            .map(|&(i, s)| {
                let ys: Vec<Elem> = self.row_ids(i).into_iter().map(|j| self.point(j)).collect();
                poly::interpolation_matrix(f, &ys).mul_vec(f, &s[..d + t])
            })
            .collect();
        let xs: Vec<Elem> = nodes.iter().map(|&(i, _)| self.point(i)).collect();
        let vinv = Matrix::vandermonde(f, &xs, k).transpose().inverse(f).expect("distinct points");
        for b in k..d + t {
            let vals: Vec<Elem> = rows.iter().map(|r| r[b]).collect();
            for (a, v) in vinv.mul_vec(f, &vals).into_iter().enumerate() {
                coef[a][b] = v;
            }
        }
        // Column polynomials, coefficients in X.
        let cols: Vec<Vec<Elem>> = nodes
            .iter()
            .map(|&(i, s)| {
                let cx: Vec<Elem> = self.column_ids(i).into_iter().map(|j| self.point(j)).collect();
                let mut vals = vec![s[0]];
                vals.extend_from_slice(&s[d + t..]);
                poly::interpolation_matrix(f, &cx).mul_vec(f, &vals)
            })
            .collect();
        for a in 0..d {
            let vals: Vec<Elem> = nodes
                .iter()
                .zip(&cols)
                .map(|(&(i, _), g)| {
                    let y = self.point(i);
                    let high = if a < k {
                        (k..d + t).fold(Elem::ZERO, |acc, b| f.add(acc, f.mul(coef[a][b], f.pow(y, b as u64))))
                    } else {
                        Elem::ZERO
                    };
                    f.sub(g[a], high)
                })
                .collect();
            for (b, v) in vinv.mul_vec(f, &vals).into_iter().enumerate() {
                coef[a][b] = v;
            }
        }
        Ok(self.monomials.iter().map(|&(a, b)| coef[a][b]).collect())
    }

    /// Generator rows of every stored symbol, over `c`.
    #[cfg(test)]
    fn generator(&self) -> Vec<Vec<crate::field::LinForm>> {
        let m = self.file_size();
        let c: Vec<crate::field::LinForm> = (0..m).map(|i| crate::field::LinForm::unit(m, i)).collect();
        self.encode(&c)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Scheme, SchemeKind};
    use super::*;
    use crate::field::{rank, solve_linear};
    use crate::precode::SecretMessage;

    fn inner(n: usize, k: usize, d: usize, t: usize, l1: usize) -> MbcrBivariate {
        MbcrBivariate::new(&SchemeParams::new(SchemeKind::MbcrBivariate, n, k, d, t, l1, 0)).unwrap()
    }

    #[test]
    fn sizes_n5() {
        let b = inner(5, 2, 2, 2, 1);
        assert_eq!(b.field().order(), 7);
        assert_eq!(b.file_size(), 8);
        assert_eq!(b.secret_len(), 3);
        assert_eq!(b.layout().iter().map(|s| s.len).sum::<usize>(), 5);
        assert_eq!(inner(5, 2, 2, 2, 0).secret_len(), 8);
    }

    #[test]
    fn randomness_monomials_come_first() {
        let b = inner(6, 2, 3, 2, 1);
        let r_len = b.file_size() - b.secret_len();
        assert!(b.monomials()[..r_len].iter().all(|&(a, c)| a < 1 || c < 1));
        assert!(b.monomials()[r_len..].iter().all(|&(a, c)| a >= 1 && c >= 1));
        assert_eq!(r_len, 2 * 3 + 2 - 1);
    }

    /// Reconstruction by a generic linear solve over the generator rows.
    #[test]
    fn structured_reconstruction_matches_generic_solve() {
        let b = inner(6, 2, 3, 2, 1);
        let s = Scheme::new(SchemeParams::new(SchemeKind::MbcrBivariate, 6, 2, 3, 2, 1, 0)).unwrap();
        let u = SecretMessage((0..s.secret_len() as u64).map(|v| Elem(v % 7)).collect());
        let nodes = s.encode_seeded(&u, 4).unwrap();
        let gen = b.generator();
        for pair in [[1usize, 2], [2, 5], [3, 6], [1, 6]] {
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for &i in &pair {
                for (form, &v) in gen[i - 1].iter().zip(&nodes[i - 1].symbols) {
                    rows.push(form.0.clone());
                    rhs.push(v);
                }
            }
            let a = Matrix::from_rows(rows, b.file_size());
            assert_eq!(rank(b.field(), &a), b.file_size());
            let c = solve_linear(b.field(), &a, &rhs).unwrap();
            let chosen: Vec<(usize, &[Elem])> = pair.iter().map(|&i| (i, nodes[i - 1].symbols.as_slice())).collect();
            assert_eq!(b.reconstruct(&chosen).unwrap(), c);
        }
    }
}
