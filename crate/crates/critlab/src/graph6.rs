//! graph6 text codec, interoperable with nauty's geng/showg.
//!
//! A line is the order n (one byte `n + 63` for n <= 62, or `~` plus three
//! bytes carrying an 18-bit big-endian value for larger n), followed by the
//! upper triangle of the adjacency matrix in column order (0,1), (0,2), (1,2),
//! (0,3), ..., packed big-endian six bits per byte, each byte offset by 63.
//!
//! Decoding is strict: padding bits must be zero, the order must use its
//! shortest header form, and trailing bytes are rejected, so decode followed
//! by encode reproduces the input byte for byte.

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error("empty input")]
    Empty,
    #[error("graph order {order} not supported (limit {MAX_VERTICES}), at byte {offset}")]
    UnsupportedOrder { order: u64, offset: usize },
    #[error("order {order} must use the short header form, at byte {offset}")]
    NonMinimalHeader { order: u64, offset: usize },
    #[error("byte {byte:#04x} out of graph6 range at byte {offset}")]
    InvalidByte { byte: u8, offset: usize },
    #[error("input ends early, expected {expected} adjacency bytes after byte {offset}")]
    Truncated { expected: usize, offset: usize },
    #[error("nonzero padding bit at byte {offset}")]
    NonzeroPadding { offset: usize },
    #[error("trailing data at byte {offset}")]
    TrailingData { offset: usize },
}

fn body_len(n: usize) -> usize {
    (n.saturating_sub(1) * n / 2 + 5) / 6
}

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        // 63 <= n <= 64 here; the three-byte header covers up to 2^18 - 1.
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut acc: u8 = 0;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).unwrap()
}

pub fn decode(text: &str) -> Result<Graph, DecodeError> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(DecodeError::Empty);
    }
    let sextet = |offset: usize| -> Result<u64, DecodeError> {
        match bytes.get(offset) {
            Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as u64),
            Some(&b) => Err(DecodeError::InvalidByte { byte: b, offset }),
            None => Err(DecodeError::Truncated {
                expected: 1,
                offset,
            }),
        }
    };

    let (order, mut pos): (u64, usize) = if bytes[0] == b'~' {
        if bytes.get(1) == Some(&b'~') {
            // Eight-byte header: order >= 258048, far past our limit. Peek at
            // the value only to report it.
            let mut order = 0u64;
            for k in 0..6 {
                order = order << 6 | sextet(2 + k).unwrap_or(0);
            }
            return Err(DecodeError::UnsupportedOrder { order, offset: 0 });
        }
        let order = sextet(1)? << 12 | sextet(2)? << 6 | sextet(3)?;
        if order <= 62 {
            return Err(DecodeError::NonMinimalHeader { order, offset: 0 });
        }
        (order, 4)
    } else {
        (sextet(0)?, 1)
    };
    if order > MAX_VERTICES as u64 {
        return Err(DecodeError::UnsupportedOrder { order, offset: 0 });
    }
    let n = order as usize;

    let nbits = n.saturating_sub(1) * n / 2;
    let nbytes = body_len(n);
    let mut g = Graph::empty(n).unwrap();
    let mut bit = 0;
    let (mut i, mut j) = (0usize, 1usize);
    for byte_idx in 0..nbytes {
        let offset = pos;
        let val = match sextet(offset) {
            Ok(v) => v,
            Err(DecodeError::Truncated { offset, .. }) => {
                return Err(DecodeError::Truncated {
                    expected: nbytes - byte_idx,
                    offset,
                })
            }
            Err(e) => return Err(e),
        };
        pos += 1;
        for k in (0..6).rev() {
            let b = val >> k & 1;
            if bit < nbits {
                if b == 1 {
                    g.add_edge(i, j).unwrap();
                }
                i += 1;
                if i == j {
                    i = 0;
                    j += 1;
                }
            } else if b == 1 {
                return Err(DecodeError::NonzeroPadding { offset });
            }
            bit += 1;
        }
    }
    if pos != bytes.len() {
        return Err(DecodeError::TrailingData { offset: pos });
    }
    #[cfg(debug_assertions)]
    g.assert_valid();
    Ok(g)
}
