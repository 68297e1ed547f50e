//! Univariate polynomials as coefficient vectors, constant term first.

use super::{Elem, Field, Matrix, PrimeField};

pub fn trim(p: &mut Vec<Elem>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(p: &[Elem]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval<F: Field>(f: &F, p: &[Elem], x: Elem) -> Elem {
    p.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn sub<F: Field>(f: &F, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let mut out: Vec<Elem> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul<F: Field>(f: &F, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub fn rem<F: Field>(f: &F, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = f.inv(m[dm]).expect("leading coefficient is nonzero");
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        for i in 0..=dm {
            let idx = dr - dm + i;
            r[idx] = f.sub(r[idx], f.mul(c, m[i]));
        }
        trim(&mut r);
    }
    r
}

pub fn gcd<F: Field>(f: &F, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// `a^e mod m`.
pub fn pow_mod<F: Field>(f: &F, a: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
    let mut base = rem(f, a, m);
    let mut acc = vec![f.one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
        base = rem(f, &mul(f, &base, &base), m);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic polynomial over `GF(p)`, given as
/// raw coefficients low to high.
pub fn is_irreducible(base: &PrimeField, modulus: &[u64]) -> bool {
    let f: Vec<Elem> = modulus.iter().map(|&c| Elem(c)).collect();
    let Some(m) = degree(&f) else { return false };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let p = base.p();
    let x = vec![Elem::ZERO, Elem::ONE];
    // x^(p^j) mod f for j = 0..=m
    let mut frob = vec![rem(base, &x, &f)];
    for j in 1..=m {
        let prev = frob[j - 1].clone();
        frob.push(pow_mod(base, &prev, p, &f));
    }
    if sub(base, &frob[m], &x).iter().any(|c| !c.is_zero()) && !sub(base, &frob[m], &x).is_empty() {
        return false;
    }
    for r in distinct_prime_factors(m) {
        let h = sub(base, &frob[m / r], &x);
        let g = gcd(base, &f, &h);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn distinct_prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lagrange weights `w` with `p(at) = sum_j w_j p(xs[j])` for every
/// polynomial of degree `< xs.len()`. The `xs` must be distinct.
pub fn lagrange_weights<F: Field>(f: &F, xs: &[Elem], at: Elem) -> Vec<Elem> {
    xs.iter()
        .enumerate()
        .map(|(j, &xj)| {
            let mut num = f.one();
            let mut den = f.one();
            for (l, &xl) in xs.iter().enumerate() {
                if l != j {
                    num = f.mul(num, f.sub(at, xl));
                    den = f.mul(den, f.sub(xj, xl));
                }
            }
            f.mul(num, f.inv(den).expect("interpolation points must be distinct"))
        })
        .collect()
}

/// Matrix mapping values at distinct `xs` to the coefficients (constant
/// first) of the interpolating polynomial of degree `< xs.len()`.
pub fn interpolation_matrix<F: Field>(f: &F, xs: &[Elem]) -> Matrix {
    // Values = V^T * coeffs with V the Vandermonde matrix.
    Matrix::vandermonde(f, xs, xs.len())
        .transpose()
        .inverse(f)
        .expect("interpolation points must be distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExtField;

    #[test]
    fn irreducibility_small_cases() {
        let gf2 = PrimeField::new(2).unwrap();
        assert!(is_irreducible(&gf2, &[1, 1, 1]));
        assert!(!is_irreducible(&gf2, &[1, 0, 1]));
        assert!(is_irreducible(&gf2, &[1, 1, 0, 0, 1]));
        assert!(!is_irreducible(&gf2, &[1, 0, 1, 0, 1]));
        let gf3 = PrimeField::new(3).unwrap();
        assert!(is_irreducible(&gf3, &[1, 0, 1]));
        assert!(!is_irreducible(&gf3, &[2, 0, 1]));
    }

    /// Counts monic irreducibles by brute-force root/factor search against the
    /// Gauss necklace formula for small degrees.
    #[test]
    fn irreducible_counts_match_necklace_formula() {
        let gf2 = PrimeField::new(2).unwrap();
        let expected = [(2usize, 1usize), (3, 2), (4, 3), (5, 6), (6, 9)];
        for (m, count) in expected {
            let found = (0..(1u64 << m))
                .filter(|low| {
                    let mut c: Vec<u64> = (0..m).map(|i| (low >> i) & 1).collect();
                    c.push(1);
                    is_irreducible(&gf2, &c)
                })
                .count();
            assert_eq!(found, count, "degree {m}");
        }
    }

    #[test]
    fn interpolation_round_trip() {
        let f = ExtField::prime(7).unwrap();
        let coeffs = vec![Elem(3), Elem(0), Elem(5), Elem(1)];
        let xs: Vec<Elem> = (1..=4).map(Elem).collect();
        let ys: Vec<Elem> = xs.iter().map(|&x| eval(&f, &coeffs, x)).collect();
        let m = interpolation_matrix(&f, &xs);
        assert_eq!(m.mul_vec(&f, &ys), coeffs);
        let w = lagrange_weights(&f, &xs, Elem(6));
        let via_weights = w.iter().zip(&ys).fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
        assert_eq!(via_weights, eval(&f, &coeffs, Elem(6)));
    }
}
