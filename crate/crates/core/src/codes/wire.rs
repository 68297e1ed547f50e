//! Binary layout for node contents.
//!
//! ```text
//! header   tag u8 | n k d t l1 l2 : u16 LE each | p : u32 LE | m : u8
//! body     count u16 LE, then per node:
//!          node_id u16 LE | symbols u16 LE | symbols, each LE in ceil(log256 q) bytes
//! ```
//!
//! A symbol is written as its packed value `sum c_i p^i`, so the base-field
//! coordinates appear least significant first.

use thiserror::Error;

use crate::field::{Elem, ExtField, Field};

use super::{CodeError, NodeContent, Scheme, SchemeKind, SchemeParams};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("input ends after {0} bytes")]
    Truncated(usize),
    #[error("{0} trailing bytes")]
    Trailing(usize),
    #[error("unknown scheme tag {0}")]
    UnknownTag(u8),
    #[error("field GF({p}^{m}) does not match the scheme's {expected}")]
    FieldMismatch { p: u64, m: usize, expected: String },
    #[error(transparent)]
    Code(#[from] CodeError),
}

const HEADER_LEN: usize = 1 + 6 * 2 + 4 + 1;

pub fn header(params: &SchemeParams, field: &ExtField) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN);
    out.push(params.kind.tag());
    for v in [params.n, params.k, params.d, params.t, params.l1, params.l2] {
        out.extend_from_slice(&(v as u16).to_le_bytes());
    }
    out.extend_from_slice(&(field.p() as u32).to_le_bytes());
    out.push(field.degree() as u8);
    out
}

/// Serializes `nodes` in the order given.
pub fn encode(scheme: &Scheme, nodes: &[NodeContent]) -> Vec<u8> {
    let field = scheme.field();
    let width = field.symbol_bytes();
    let mut out = header(scheme.params(), field);
    out.extend_from_slice(&(nodes.len() as u16).to_le_bytes());
    for node in nodes {
        out.extend_from_slice(&(node.node_id as u16).to_le_bytes());
        out.extend_from_slice(&(node.symbols.len() as u16).to_le_bytes());
        for s in &node.symbols {
            out.extend_from_slice(&s.0.to_le_bytes()[..width]);
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], WireError> {
        let end = self.pos + len;
        let out = self.bytes.get(self.pos..end).ok_or(WireError::Truncated(self.bytes.len()))?;
        self.pos = end;
        Ok(out)
    }

    fn u16(&mut self) -> Result<usize, WireError> {
        let b = self.take(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]) as usize)
    }

    fn uint(&mut self, width: usize) -> Result<u64, WireError> {
        let mut buf = [0u8; 8];
        buf[..width].copy_from_slice(self.take(width)?);
        Ok(u64::from_le_bytes(buf))
    }
}

/// Parses a buffer written by [`encode`], rebuilding the scheme from the
/// header and validating every symbol against it.
pub fn decode(bytes: &[u8]) -> Result<(Scheme, Vec<NodeContent>), WireError> {
    let mut r = Reader { bytes, pos: 0 };
    let tag = r.take(1)?[0];
    let kind = SchemeKind::from_tag(tag).ok_or(WireError::UnknownTag(tag))?;
    let mut v = [0usize; 6];
    for slot in &mut v {
        *slot = r.u16()?;
    }
    let p = r.uint(4)?;
    let m = r.take(1)?[0] as usize;
    let scheme = Scheme::new(SchemeParams::new(kind, v[0], v[1], v[2], v[3], v[4], v[5]))?;
    let field = scheme.field();
    if field.p() != p || field.degree() != m {
        return Err(WireError::FieldMismatch { p, m, expected: field.to_string() });
    }
    let width = field.symbol_bytes();
    let count = r.u16()?;
    let mut nodes = Vec::with_capacity(count);
    for _ in 0..count {
        let node_id = r.u16()?;
        if node_id == 0 || node_id > scheme.params().n {
            return Err(CodeError::UnknownNode(node_id).into());
        }
        let len = r.u16()?;
        if len != scheme.alpha() {
            return Err(CodeError::ContentLength { node: node_id, expected: scheme.alpha(), got: len }.into());
        }
        let mut symbols = Vec::with_capacity(len);
        for _ in 0..len {
            let s = Elem(r.uint(width)?);
            if !field.contains(s) {
                return Err(CodeError::OutOfRange(s.0).into());
            }
            symbols.push(s);
        }
        nodes.push(NodeContent { node_id, symbols, layout: scheme.layout() });
    }
    if r.pos != bytes.len() {
        return Err(WireError::Trailing(bytes.len() - r.pos));
    }
    Ok((scheme, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precode::SecretMessage;

    #[test]
    fn round_trip() {
        let s = Scheme::new(SchemeParams::new(SchemeKind::MscrIa, 4, 2, 2, 2, 1, 0)).unwrap();
        let nodes = s.encode_seeded(&SecretMessage(vec![Elem(1), Elem(2)]), 9).unwrap();
        let bytes = encode(&s, &nodes);
        assert_eq!(bytes.len(), HEADER_LEN + 2 + 4 * (4 + 2));
        assert_eq!(bytes[0], 3);
        assert_eq!(&bytes[13..17], &3u32.to_le_bytes());
        let (back, got) = decode(&bytes).unwrap();
        assert_eq!(back.params(), s.params());
        assert_eq!(got, nodes);
    }

    #[test]
    fn rejects_damage() {
        let s = Scheme::new(SchemeParams::new(SchemeKind::MscrDk, 4, 2, 2, 2, 0, 1)).unwrap();
        let nodes = s.encode_seeded(&SecretMessage(vec![Elem(5)]), 2).unwrap();
        let bytes = encode(&s, &nodes);
        assert!(matches!(decode(&bytes[..bytes.len() - 1]), Err(WireError::Truncated(_))));
        let mut extra = bytes.clone();
        extra.push(0);
        assert_eq!(decode(&extra).unwrap_err(), WireError::Trailing(1));
        let mut bad = bytes;
        bad[0] = 99;
        assert_eq!(decode(&bad).unwrap_err(), WireError::UnknownTag(99));
    }
}
