//! Gabidulin precoding of secret and random symbols.
//!
//! The coefficient vector of the linearized polynomial is `c = (r || u)`:
//! randomness occupies indices `[0, |r|)` and the secret occupies
//! `[|r|, M)`. The block is `x_j = f(g_j)`, so `x = G c` with
//! `G[j][i] = g_j^(p^i)`.

use thiserror::Error;

use crate::field::{apply, base_rank, basis_elements, moore_matrix, Elem, ExtField, Field, FieldError, Linear, Matrix};
use crate::field::{solve_linear, SolveError};
use crate::rng::SymbolRng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrecodeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("evaluation points are linearly dependent over the base field")]
    DependentPoints,
    #[error("extension degree {m} is smaller than the block length {len}")]
    FieldTooSmall { m: usize, len: usize },
    #[error("observations do not determine the randomness (rank {rank} < {needed})")]
    Underdetermined { rank: usize, needed: usize },
    #[error("observations are inconsistent with the given secret")]
    Inconsistent,
    #[error("symbol {0:#x} is outside the field")]
    OutOfRange(u64),
}

impl From<FieldError> for PrecodeError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::DimensionMismatch { expected, got } => PrecodeError::Dimension { expected, got },
            FieldError::OutOfRange(v) => PrecodeError::OutOfRange(v),
            _ => PrecodeError::DependentPoints,
        }
    }
}

/// The secret `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SecretMessage(pub Vec<Elem>);

/// The random symbols `r`, with the seed they were drawn from when known.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Randomness {
    pub symbols: Vec<Elem>,
    pub seed: Option<u64>,
}

impl Randomness {
    pub fn new(symbols: Vec<Elem>) -> Self {
        Randomness { symbols, seed: None }
    }

    /// `len` uniform symbols of a field of order `order`.
    pub fn from_seed(order: u64, len: usize, seed: u64) -> Self {
        let symbols = SymbolRng::new(seed).symbols(order, len);
        Randomness { symbols, seed: Some(seed) }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecodedBlock {
    pub values: Vec<Elem>,
    pub points: Vec<Elem>,
}

/// Evaluation of `f` with coefficients `(r || u)` at `points`.
pub fn precode(ext: &ExtField, u: &SecretMessage, r: &Randomness, points: &[Elem]) -> Result<PrecodedBlock, PrecodeError> {
    let pre = Precoder::with_points(ext.clone(), points.to_vec())?;
    let len = u.0.len() + r.len();
    if len != points.len() {
        return Err(PrecodeError::Dimension { expected: points.len(), got: len });
    }
    check_symbols(ext, u.0.iter().chain(&r.symbols))?;
    let coeffs: Vec<Elem> = r.symbols.iter().chain(&u.0).copied().collect();
    Ok(PrecodedBlock { values: pre.encode(&coeffs), points: points.to_vec() })
}

/// Inverse of [`precode`]; `secret_len` is `M^s`.
pub fn decode_precode(ext: &ExtField, block: &PrecodedBlock, secret_len: usize) -> Result<(SecretMessage, Randomness), PrecodeError> {
    if block.values.len() != block.points.len() {
        return Err(PrecodeError::Dimension { expected: block.points.len(), got: block.values.len() });
    }
    if secret_len > block.points.len() {
        return Err(PrecodeError::Dimension { expected: block.points.len(), got: secret_len });
    }
    check_symbols(ext, block.values.iter())?;
    let pre = Precoder::with_points(ext.clone(), block.points.clone())?;
    let coeffs = pre.decode(&block.values);
    Ok(split(coeffs, secret_len))
}

/// Solves for `r` from evaluations of `f` at the given points, knowing `u`.
/// `r_len` is `|r|`; the block length is `r_len + |u|`.
pub fn solve_randomness_given_secret(
    ext: &ExtField,
    observations: &[(Elem, Elem)],
    u: &SecretMessage,
    r_len: usize,
) -> Result<Randomness, PrecodeError> {
    let total = r_len + u.0.len();
    if total > ext.degree() {
        return Err(PrecodeError::FieldTooSmall { m: ext.degree(), len: total });
    }
    check_symbols(ext, u.0.iter().chain(observations.iter().map(|(_, v)| v)))?;
    let gs: Vec<Elem> = observations.iter().map(|&(g, _)| g).collect();
    let moore = moore_matrix(ext, &gs, total).transpose();
    let mut rhs = Vec::with_capacity(observations.len());
    for (row, &(_, value)) in observations.iter().enumerate() {
        let known = u
            .0
            .iter()
            .enumerate()
            .fold(ext.zero(), |acc, (i, &ui)| ext.add(acc, ext.mul(ui, moore.get(row, r_len + i))));
        rhs.push(ext.sub(value, known));
    }
    let a = moore.col_range(0, r_len);
    match solve_linear(ext, &a, &rhs) {
        Ok(symbols) => Ok(Randomness::new(symbols)),
        Err(SolveError::Underdetermined { rank, cols }) => Err(PrecodeError::Underdetermined { rank, needed: cols }),
        Err(_) => Err(PrecodeError::Inconsistent),
    }
}

fn split(mut coeffs: Vec<Elem>, secret_len: usize) -> (SecretMessage, Randomness) {
    let u = coeffs.split_off(coeffs.len() - secret_len);
    (SecretMessage(u), Randomness::new(coeffs))
}

fn check_symbols<'a>(ext: &ExtField, it: impl Iterator<Item = &'a Elem>) -> Result<(), PrecodeError> {
    for v in it {
        if !ext.contains(*v) {
            return Err(PrecodeError::OutOfRange(v.0));
        }
    }
    Ok(())
}

/// Cached generator and decoder for a fixed point set.
#[derive(Clone, Debug)]
pub struct Precoder {
    ext: ExtField,
    points: Vec<Elem>,
    generator: Matrix,
    decoder: Matrix,
}

impl Precoder {
    /// Block length `len` on the canonical basis points.
    pub fn new(ext: ExtField, len: usize) -> Result<Self, PrecodeError> {
        if len > ext.degree() {
            return Err(PrecodeError::FieldTooSmall { m: ext.degree(), len });
        }
        let points = basis_elements(&ext, len)?;
        Self::with_points(ext, points)
    }

    pub fn with_points(ext: ExtField, points: Vec<Elem>) -> Result<Self, PrecodeError> {
        if points.len() > ext.degree() {
            return Err(PrecodeError::FieldTooSmall { m: ext.degree(), len: points.len() });
        }
        check_symbols(&ext, points.iter())?;
        if base_rank(&ext, &points) < points.len() {
            return Err(PrecodeError::DependentPoints);
        }
        let generator = moore_matrix(&ext, &points, points.len()).transpose();
        let decoder = generator.inverse(&ext).ok_or(PrecodeError::DependentPoints)?;
        Ok(Precoder { ext, points, generator, decoder })
    }

    pub fn field(&self) -> &ExtField {
        &self.ext
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `G`, mapping coefficients `(r || u)` to block values.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn encode<V: Linear>(&self, coeffs: &[V]) -> Vec<V> {
        apply(&self.ext, &self.generator, coeffs)
    }

    pub fn decode<V: Linear>(&self, values: &[V]) -> Vec<V> {
        apply(&self.ext, &self.decoder, values)
    }
}
