use std::fmt;

use thiserror::Error;

use super::{Elem, Field};

/// Failure modes of [`solve_linear`].
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum SolveError {
    #[error("linear system is inconsistent")]
    NoSolution,
    #[error("linear system is consistent but has rank {rank} < {cols} unknowns")]
    Underdetermined { rank: usize, cols: usize },
    #[error("dimension mismatch: matrix has {rows} rows, right-hand side has {rhs}")]
    Dimension { rows: usize, rhs: usize },
}

/// Dense row-major matrix of field elements. The field itself is supplied to
/// each operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Elem>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    /// `rows x points.len()` Vandermonde matrix with entry `(i, j) = points[j]^i`.
    pub fn vandermonde<F: Field>(f: &F, points: &[Elem], rows: usize) -> Self {
        let mut m = Self::zeros(rows, points.len());
        for (j, &x) in points.iter().enumerate() {
            let mut acc = f.one();
            for i in 0..rows {
                m.set(i, j, acc);
                acc = f.mul(acc, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(0, self.cols);
        for &r in idx {
            out.push_row(self.row(r));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Columns `[start, end)`.
    pub fn col_range(&self, start: usize, end: usize) -> Self {
        let idx: Vec<usize> = (start..end).collect();
        self.select_cols(&idx)
    }

    pub fn hstack(&self, other: &Matrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    pub fn mul<F: Field>(&self, f: &F, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field>(&self, f: &F, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref<F: Field>(&mut self, f: &F, limit_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..limit_cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = f.inv(self.get(row, col)).expect("pivot is nonzero");
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank<F: Field>(&self, f: &F) -> usize {
        rank(f, self)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse<F: Field>(&self, f: &F) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(n));
        let pivots = aug.rref(f, n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.col_range(n, 2 * n))
    }

    pub fn is_invertible<F: Field>(&self, f: &F) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Row rank over the field `f`, by Gaussian elimination with first-nonzero
/// pivoting.
pub fn rank<F: Field>(f: &F, m: &Matrix) -> usize {
    let mut work = m.clone();
    let mut rank = 0;
    for col in 0..work.cols {
        if rank == work.rows {
            break;
        }
        let Some(p) = (rank..work.rows).find(|&r| !work.get(r, col).is_zero()) else {
            continue;
        };
        work.swap_rows(rank, p);
        let inv = f.inv(work.get(rank, col)).expect("pivot is nonzero");
        for r in rank + 1..work.rows {
            let factor = f.mul(work.get(r, col), inv);
            if factor.is_zero() {
                continue;
            }
            for c in col..work.cols {
                let v = f.sub(work.get(r, c), f.mul(factor, work.get(rank, c)));
                work.set(r, c, v);
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `a x = b`. Over-determined systems are accepted when consistent and
/// of full column rank.
pub fn solve_linear<F: Field>(f: &F, a: &Matrix, b: &[Elem]) -> Result<Vec<Elem>, SolveError> {
    if a.rows != b.len() {
        return Err(SolveError::Dimension { rows: a.rows, rhs: b.len() });
    }
    let cols = a.cols;
    let rhs = Matrix::from_rows(b.iter().map(|&v| vec![v]).collect(), 1);
    let mut aug = a.hstack(&rhs);
    let pivots = aug.rref(f, cols);
    let rank = pivots.len();
    if (rank..aug.rows).any(|r| !aug.get(r, cols).is_zero()) {
        return Err(SolveError::NoSolution);
    }
    if rank < cols {
        return Err(SolveError::Underdetermined { rank, cols });
    }
    let mut x = vec![f.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, cols);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ExtField, PrimeField};
    use proptest::prelude::*;

    fn m(rows: &[&[u64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Elem(v)).collect()).collect(), cols)
    }

    #[test]
    fn rank_examples() {
        let gf3 = PrimeField::new(3).unwrap();
        assert_eq!(rank(&gf3, &Matrix::identity(2)), 2);
        assert_eq!(rank(&gf3, &Matrix::zeros(2, 2)), 0);
        let gf7 = PrimeField::new(7).unwrap();
        let v = m(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 2]]);
        assert_eq!(rank(&gf7, &v), 3);
    }

    /// Brute-force determinant by permutation expansion, used as an
    /// independent check on the elimination-based rank.
    fn det_by_permutations(f: &PrimeField, a: &Matrix) -> Elem {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = a.rows();
        let mut acc = f.zero();
        for p in perms(n) {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let term = (0..n).fold(f.one(), |t, i| f.mul(t, a.get(i, p[i])));
            acc = if inversions % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn vandermonde_gf7_nonsingular_by_permutation_expansion() {
        let gf7 = PrimeField::new(7).unwrap();
        let v = m(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 2]]);
        assert_ne!(det_by_permutations(&gf7, &v), Elem::ZERO);
        let built = Matrix::vandermonde(&gf7, &[Elem(1), Elem(2), Elem(3)], 3).transpose();
        assert_eq!(built, v);
    }

    #[test]
    fn solve_examples() {
        let gf7 = PrimeField::new(7).unwrap();
        let b = vec![Elem(3), Elem(5)];
        assert_eq!(solve_linear(&gf7, &Matrix::identity(2), &b), Ok(b.clone()));
        assert_eq!(solve_linear(&gf7, &Matrix::zeros(2, 2), &b), Err(SolveError::NoSolution));
        assert_eq!(
            solve_linear(&gf7, &Matrix::zeros(2, 2), &[Elem(0), Elem(0)]),
            Err(SolveError::Underdetermined { rank: 0, cols: 2 })
        );
        // 1 + 2X evaluated at 1, 2, 3 over GF(7): 3, 5, 0.
        let v = m(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 2]]);
        let evals: Vec<Elem> = [1u64, 2, 3].iter().map(|&x| Elem((1 + 2 * x) % 7)).collect();
        assert_eq!(evals, vec![Elem(3), Elem(5), Elem(0)]);
        assert_eq!(solve_linear(&gf7, &v, &evals), Ok(vec![Elem(1), Elem(2), Elem(0)]));
    }

    #[test]
    fn overdetermined_consistent_system() {
        let gf5 = PrimeField::new(5).unwrap();
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve_linear(&gf5, &a, &[Elem(2), Elem(4), Elem(1)]), Ok(vec![Elem(2), Elem(4)]));
        assert_eq!(solve_linear(&gf5, &a, &[Elem(2), Elem(4), Elem(2)]), Err(SolveError::NoSolution));
    }

    #[test]
    fn inverse_round_trip() {
        let f = ExtField::new(2, 8).unwrap();
        let pts: Vec<Elem> = (1..=4).map(Elem).collect();
        let v = Matrix::vandermonde(&f, &pts, 4);
        let inv = v.inverse(&f).unwrap();
        assert_eq!(v.mul(&f, &inv), Matrix::identity(4));
        assert!(Matrix::zeros(3, 3).inverse(&f).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), proptest::collection::vec(0u64..5, r * c)))
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose((r, c, data) in arb_matrix()) {
            let f = PrimeField::new(5).unwrap();
            let a = Matrix { rows: r, cols: c, data: data.into_iter().map(Elem).collect() };
            prop_assert_eq!(rank(&f, &a), rank(&f, &a.transpose()));
        }

        #[test]
        fn solve_recovers_planted_solution(data in proptest::collection::vec(0u64..7, 9), x in proptest::collection::vec(0u64..7, 3)) {
            let f = PrimeField::new(7).unwrap();
            let a = Matrix { rows: 3, cols: 3, data: data.into_iter().map(Elem).collect() };
            let x: Vec<Elem> = x.into_iter().map(Elem).collect();
            let b = a.mul_vec(&f, &x);
            match solve_linear(&f, &a, &b) {
                Ok(sol) => prop_assert_eq!(sol, x),
                Err(SolveError::Underdetermined { rank, .. }) => prop_assert!(rank < 3),
                Err(e) => prop_assert!(false, "unexpected {:?}", e),
            }
        }
    }
}
