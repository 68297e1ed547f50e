use super::{rank, ExtField, Elem, Field, FieldError, Matrix};

/// `f(g) = sum_i coeffs[i] * g^(p^i)` over an extension field, where `p` is
/// the characteristic of the base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearizedPolynomial {
    pub coeffs: Vec<Elem>,
}

impl LinearizedPolynomial {
    pub fn new(coeffs: Vec<Elem>) -> Self {
        LinearizedPolynomial { coeffs }
    }

    pub fn eval(&self, ext: &ExtField, g: Elem) -> Elem {
        let mut power = g;
        let mut acc = Elem::ZERO;
        for &c in &self.coeffs {
            acc = ext.add(acc, ext.mul(c, power));
            power = ext.frobenius(power);
        }
        acc
    }
}

/// The `rows x points.len()` Moore matrix, entry `(i, j) = points[j]^(p^i)`.
pub fn moore_matrix(ext: &ExtField, points: &[Elem], rows: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, points.len());
    for (j, &g) in points.iter().enumerate() {
        let mut power = g;
        for i in 0..rows {
            m.set(i, j, power);
            power = ext.frobenius(power);
        }
    }
    m
}

/// Rank over the base field of the coordinate vectors of `points`.
pub fn base_rank(ext: &ExtField, points: &[Elem]) -> usize {
    let base = *ext.base();
    let rows = points.iter().map(|&g| ext.coords(g).into_iter().map(Elem).collect()).collect();
    rank(&base, &Matrix::from_rows(rows, ext.degree()))
}

/// The first `count` elements `1, X, X^2, ..` of the polynomial basis.
pub fn basis_elements(ext: &ExtField, count: usize) -> Result<Vec<Elem>, FieldError> {
    if count > ext.degree() {
        return Err(FieldError::CountExceedsDegree { count, m: ext.degree() });
    }
    let p = ext.p();
    Ok((0..count as u32).map(|i| Elem(p.pow(i))).collect())
}

/// Recovers the linearized polynomial with `points.len()` coefficients that
/// takes the given values.
pub fn interpolate_linearized(ext: &ExtField, points: &[(Elem, Elem)]) -> Result<LinearizedPolynomial, FieldError> {
    let gs: Vec<Elem> = points.iter().map(|&(g, _)| g).collect();
    if base_rank(ext, &gs) < gs.len() {
        return Err(FieldError::DependentPoints);
    }
    let vals: Vec<Elem> = points.iter().map(|&(_, v)| v).collect();
    // values = M^T c with M the Moore matrix.
    let a = moore_matrix(ext, &gs, gs.len()).transpose();
    let coeffs = super::solve_linear(ext, &a, &vals).map_err(|_| FieldError::DependentPoints)?;
    Ok(LinearizedPolynomial { coeffs })
}
