//! Finite-field arithmetic for desk-scale instances.
//!
//! Two field types are provided:
//!
//! * [`PrimeField`]: `GF(p)` for a prime `p`.
//! * [`ExtField`]: `GF(p^m)` built over a [`PrimeField`] with a monic
//!   irreducible modulus found by a deterministic search. `m = 1` gives a
//!   field isomorphic to `GF(p)` with identical element encoding, so the code
//!   constructions use `ExtField` throughout.
//!
//! Elements are plain [`Elem`] values carrying the *packed* representation
//! `sum_i c_i p^i` of their coordinate vector `(c_0, .., c_{m-1})` over the
//! base field. All arithmetic goes through a field handle, which keeps
//! elements `Copy` and lets matrices and polynomials stay field-agnostic.

mod linear;
mod linearized;
mod matrix;
pub mod poly;

use std::fmt;

use thiserror::Error;

pub use linear::{apply, combine, LinForm, Linear};
pub use linearized::{base_rank, basis_elements, interpolate_linearized, moore_matrix, LinearizedPolynomial};
pub use matrix::{rank, solve_linear, Matrix, SolveError};

/// Largest field order supported by the packed `u64` representation.
pub const MAX_ORDER: u64 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("GF({p}^{m}) exceeds the supported order 2^32")]
    TooLarge { p: u64, m: usize },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    InvalidModulus(usize),
    #[error("points are linearly dependent over the base field")]
    DependentPoints,
    #[error("requested {count} basis elements but the extension degree is {m}")]
    CountExceedsDegree { count: usize, m: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element {0:#x} is outside the field")]
    OutOfRange(u64),
}

/// A field element in packed coordinate form.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// Arithmetic over a finite field whose elements are [`Elem`]s.
pub trait Field {
    /// Number of elements.
    fn order(&self) -> u64;
    /// Characteristic.
    fn characteristic(&self) -> u64;

    fn add(&self, a: Elem, b: Elem) -> Elem;
    fn neg(&self, a: Elem) -> Elem;
    fn mul(&self, a: Elem, b: Elem) -> Elem;

    fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn zero(&self) -> Elem {
        Elem::ZERO
    }

    fn one(&self) -> Elem {
        Elem::ONE
    }

    fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    fn contains(&self, a: Elem) -> bool {
        a.0 < self.order()
    }

    /// Every element in increasing packed order.
    fn elements(&self) -> std::iter::Map<std::ops::Range<u64>, fn(u64) -> Elem> {
        (0..self.order()).map(Elem as fn(u64) -> Elem)
    }
}

/// `GF(p)` for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_ORDER {
            return Err(FieldError::TooLarge { p, m: 1 });
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: u64) -> Elem {
        Elem(v % self.p)
    }
}

impl Field for PrimeField {
    fn order(&self) -> u64 {
        self.p
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem((a.0 + b.0) % self.p)
    }

    fn neg(&self, a: Elem) -> Elem {
        if a.0 == 0 {
            a
        } else {
            Elem(self.p - a.0)
        }
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(a.0 * b.0 % self.p)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// `GF(p^m)` represented over its prime subfield.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    base: PrimeField,
    m: usize,
    /// Monic modulus, coefficients low to high, length `m + 1`.
    modulus: Vec<u64>,
    order: u64,
    /// Packed modulus for the characteristic-2 fast path.
    modulus_bits: u64,
}

impl ExtField {
    /// Builds `GF(p^m)` with the first irreducible monic modulus in
    /// lexicographic order of its low coefficient vector (read as a base-`p`
    /// number with `c_{m-1}` most significant).
    pub fn new(p: u64, m: usize) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = checked_order(p, m)?;
        for low in 0..order {
            let mut modulus = digits(low, p, m);
            modulus.push(1);
            if poly::is_irreducible(&base, &modulus) {
                return Ok(Self::assemble(base, m, modulus, order));
            }
        }
        // Irreducible polynomials exist for every degree.
        unreachable!("no irreducible polynomial of degree {m} over GF({p})")
    }

    /// Builds `GF(p^m)` from an explicit modulus (low to high, monic).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        let m = modulus.len().saturating_sub(1);
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = checked_order(p, m)?;
        if modulus.iter().any(|&c| c >= p) || modulus[m] != 1 || !poly::is_irreducible(&base, &modulus) {
            return Err(FieldError::InvalidModulus(m));
        }
        Ok(Self::assemble(base, m, modulus, order))
    }

    /// `GF(p)` as a degree-one extension (modulus `X`).
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    fn assemble(base: PrimeField, m: usize, modulus: Vec<u64>, order: u64) -> Self {
        let modulus_bits = if base.p == 2 {
            modulus.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        ExtField { base, m, modulus, order, modulus_bits }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    /// Characteristic `p` of the base field (the Frobenius exponent `q`).
    pub fn p(&self) -> u64 {
        self.base.p
    }

    /// Extension degree.
    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Coordinates over the base field, constant term first.
    pub fn coords(&self, a: Elem) -> Vec<u64> {
        digits(a.0, self.base.p, self.m)
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<Elem, FieldError> {
        if coords.len() != self.m {
            return Err(FieldError::DimensionMismatch { expected: self.m, got: coords.len() });
        }
        let mut v = 0u64;
        for &c in coords.iter().rev() {
            if c >= self.base.p {
                return Err(FieldError::OutOfRange(c));
            }
            v = v * self.base.p + c;
        }
        Ok(Elem(v))
    }

    /// Embeds a base-field element.
    pub fn from_base(&self, c: u64) -> Elem {
        Elem(c % self.base.p)
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_base(&self, a: Elem) -> bool {
        a.0 < self.base.p
    }

    /// The generator `X` of the polynomial basis (or `1` when `m = 1`).
    pub fn x(&self) -> Elem {
        if self.m == 1 {
            Elem::ONE
        } else {
            Elem(self.base.p)
        }
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        if self.base.p == 2 {
            self.mul(a, a)
        } else {
            self.pow(a, self.base.p)
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let n = self.order - 1;
        let mut ord = n;
        for f in prime_factors(n) {
            while ord % f == 0 && self.pow(a, ord / f) == Elem::ONE {
                ord /= f;
            }
        }
        Some(ord)
    }

    /// Smallest element (in packed order) generating the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        (1..self.order)
            .map(Elem)
            .find(|&a| self.multiplicative_order(a) == Some(self.order - 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Number of bytes needed to hold any packed element.
    pub fn symbol_bytes(&self) -> usize {
        let bits = 64 - (self.order - 1).leading_zeros() as usize;
        bits.div_ceil(8).max(1)
    }

    fn mul_gf2(&self, a: u64, b: u64) -> u64 {
        let mut r = 0u64;
        let mut bb = b;
        let mut i = 0;
        while bb != 0 {
            if bb & 1 == 1 {
                r ^= a << i;
            }
            bb >>= 1;
            i += 1;
        }
        let m = self.m;
        for i in (m..(2 * m).saturating_sub(1)).rev() {
            if (r >> i) & 1 == 1 {
                r ^= self.modulus_bits << (i - m);
            }
        }
        r
    }

    fn mul_generic(&self, a: u64, b: u64) -> u64 {
        let p = self.base.p;
        if self.m == 1 {
            return a * b % p;
        }
        let da = digits(a, p, self.m);
        let db = digits(b, p, self.m);
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for i in (self.m..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (j, &mc) in self.modulus.iter().enumerate() {
                let idx = i - self.m + j;
                prod[idx] = (prod[idx] + p - c * mc % p) % p;
            }
        }
        prod.truncate(self.m);
        prod.iter().rev().fold(0, |acc, &c| acc * p + c)
    }
}

impl Field for ExtField {
    fn order(&self) -> u64 {
        self.order
    }

    fn characteristic(&self) -> u64 {
        self.base.p
    }

    fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.base.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.m == 1 {
            return Elem((a.0 + b.0) % p);
        }
        let (mut x, mut y, mut out, mut scale) = (a.0, b.0, 0u64, 1u64);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * scale;
            x /= p;
            y /= p;
            scale *= p;
        }
        Elem(out)
    }

    fn neg(&self, a: Elem) -> Elem {
        let p = self.base.p;
        if p == 2 {
            return a;
        }
        if self.m == 1 {
            return Elem((p - a.0 % p) % p);
        }
        let (mut x, mut out, mut scale) = (a.0, 0u64, 1u64);
        while x > 0 {
            out += ((p - x % p) % p) * scale;
            x /= p;
            scale *= p;
        }
        Elem(out)
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        if self.base.p == 2 {
            Elem(self.mul_gf2(a.0, b.0))
        } else {
            Elem(self.mul_generic(a.0, b.0))
        }
    }
}

impl fmt::Display for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "GF({})", self.base.p)
        } else {
            write!(f, "GF({}^{})", self.base.p, self.m)
        }
    }
}

fn checked_order(p: u64, m: usize) -> Result<u64, FieldError> {
    let mut order: u64 = 1;
    for _ in 0..m {
        order = order.checked_mul(p).filter(|&o| o <= MAX_ORDER).ok_or(FieldError::TooLarge { p, m })?;
    }
    Ok(order)
}

/// Base-`p` digits of `v`, least significant first, padded to `len`.
fn digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `Some((p, m))` when `q = p^m` for a prime `p`.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut m) = (q, 0usize);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn axioms_exhaustive<F: Field>(f: &F) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.zero()), a);
            assert_eq!(f.mul(a, f.one()), a);
            assert_eq!(f.add(a, f.neg(a)), f.zero());
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_field_axioms_small() {
        for p in [2, 3, 5, 7] {
            axioms_exhaustive(&PrimeField::new(p).unwrap());
            axioms_exhaustive(&ExtField::prime(p).unwrap());
        }
    }

    #[test]
    fn small_extension_axioms() {
        axioms_exhaustive(&ExtField::new(2, 2).unwrap());
        axioms_exhaustive(&ExtField::new(2, 3).unwrap());
        axioms_exhaustive(&ExtField::new(3, 2).unwrap());
    }

    #[test]
    fn lexicographic_modulus_choice() {
        assert_eq!(ExtField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(ExtField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(ExtField::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(ExtField::new(2, 8).unwrap().modulus(), &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert_eq!(ExtField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(ExtField::prime(7).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(PrimeField::new(6), Err(FieldError::NotPrime(6)));
        assert!(matches!(ExtField::new(2, 33), Err(FieldError::TooLarge { .. })));
        assert_eq!(ExtField::new(2, 0), Err(FieldError::ZeroDegree));
        assert_eq!(ExtField::with_modulus(2, vec![1, 0, 1]), Err(FieldError::InvalidModulus(2)));
    }

    #[test]
    fn gf4_and_gf3_generators() {
        let gf3 = ExtField::prime(3).unwrap();
        assert_eq!(gf3.primitive_element(), Elem(2));
        let gf4 = ExtField::new(2, 2).unwrap();
        let w = gf4.primitive_element();
        assert_eq!(gf4.multiplicative_order(w), Some(3));
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(3), Some((3, 1)));
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn coordinates_round_trip() {
        let f = ExtField::new(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coords(&f.coords(a)).unwrap(), a);
        }
    }

    #[test]
    fn symbol_width() {
        assert_eq!(ExtField::new(2, 4).unwrap().symbol_bytes(), 1);
        assert_eq!(ExtField::new(2, 8).unwrap().symbol_bytes(), 1);
        assert_eq!(ExtField::new(2, 16).unwrap().symbol_bytes(), 2);
        assert_eq!(ExtField::new(2, 32).unwrap().symbol_bytes(), 4);
        assert_eq!(ExtField::prime(7).unwrap().symbol_bytes(), 1);
    }

    proptest! {
        #[test]
        fn gf2_32_axioms_sampled(a in 0u64..(1 << 32), b in 0u64..(1 << 32), c in 0u64..(1 << 32)) {
            let f = ExtField::new(2, 32).unwrap();
            let (a, b, c) = (Elem(a), Elem(b), Elem(c));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            }
        }

        #[test]
        fn gf5_4_axioms_sampled(a in 0u64..625, b in 0u64..625, c in 0u64..625) {
            let f = ExtField::new(5, 4).unwrap();
            let (a, b, c) = (Elem(a), Elem(b), Elem(c));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            }
        }

        #[test]
        fn frobenius_is_additive(a in 0u64..(1 << 16), b in 0u64..(1 << 16)) {
            let f = ExtField::new(2, 16).unwrap();
            let (a, b) = (Elem(a), Elem(b));
            prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        }
    }
}
