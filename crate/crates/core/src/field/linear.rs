use super::{Elem, Field, Matrix};

/// Values that support field-linear combination.
///
/// Encoding and repair in every construction are linear maps with
/// data-independent coefficients. Running them over [`Elem`] produces actual
/// symbols; running them over [`LinForm`] produces each symbol's coefficient
/// row in terms of the message vector, which is how observation matrices are
/// derived.
pub trait Linear: Clone + PartialEq + std::fmt::Debug {
    /// The additive identity with the same shape as `self`.
    fn zero_like(&self) -> Self;
    /// `self += c * other`.
    fn add_scaled<F: Field>(&mut self, f: &F, c: Elem, other: &Self);
}

impl Linear for Elem {
    fn zero_like(&self) -> Self {
        Elem::ZERO
    }

    fn add_scaled<F: Field>(&mut self, f: &F, c: Elem, other: &Self) {
        *self = f.add(*self, f.mul(c, *other));
    }
}

/// A linear functional given by its coefficient row.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinForm(pub Vec<Elem>);

impl LinForm {
    pub fn unit(len: usize, idx: usize) -> Self {
        let mut v = vec![Elem::ZERO; len];
        v[idx] = Elem::ONE;
        LinForm(v)
    }

    pub fn evaluate<F: Field>(&self, f: &F, x: &[Elem]) -> Elem {
        self.0.iter().zip(x).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }
}

impl Linear for LinForm {
    fn zero_like(&self) -> Self {
        LinForm(vec![Elem::ZERO; self.0.len()])
    }

    fn add_scaled<F: Field>(&mut self, f: &F, c: Elem, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a = f.add(*a, f.mul(c, b));
        }
    }
}

/// `sum_i coeffs[i] * vals[i]`. Panics on empty input, since the shape of the
/// zero value is taken from the first entry.
pub fn combine<V: Linear, F: Field>(f: &F, coeffs: &[Elem], vals: &[V]) -> V {
    assert_eq!(coeffs.len(), vals.len(), "coefficient count mismatch");
    let mut acc = vals.first().expect("combination of no values").zero_like();
    for (&c, v) in coeffs.iter().zip(vals) {
        acc.add_scaled(f, c, v);
    }
    acc
}

/// Matrix-vector product `m * vals` over generic linear values.
pub fn apply<V: Linear, F: Field>(f: &F, m: &Matrix, vals: &[V]) -> Vec<V> {
    (0..m.rows()).map(|r| combine(f, m.row(r), vals)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn scalar_and_form_paths_agree() {
        let f = PrimeField::new(7).unwrap();
        let x = [Elem(3), Elem(5), Elem(6)];
        let forms: Vec<LinForm> = (0..3).map(|i| LinForm::unit(3, i)).collect();
        let m = Matrix::from_rows(vec![vec![Elem(1), Elem(2), Elem(3)], vec![Elem(4), Elem(0), Elem(6)]], 3);
        let scalars = apply(&f, &m, &x);
        let symbolic = apply(&f, &m, &forms);
        for (s, form) in scalars.iter().zip(&symbolic) {
            assert_eq!(*s, form.evaluate(&f, &x));
        }
    }
}
