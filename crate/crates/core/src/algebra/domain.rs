use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest domain accepted unless a caller asks for another limit.
///
/// Cube powers of a three-element set are the biggest domains that occur.
pub const DEFAULT_MAX_DOMAIN: usize = 27;

/// Upper bound on the number of cells in a dense table or relation.
pub const MAX_TABLE_CELLS: usize = 1 << 26;

/// A finite set `{0, .., size-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Domain {
    size: usize,
}

impl Domain {
    pub fn new(size: usize) -> Result<Self> {
        Self::with_limit(size, DEFAULT_MAX_DOMAIN)
    }

    pub fn with_limit(size: usize, limit: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Argument("domain size must be at least 1".into()));
        }
        if size > limit || size > 255 {
            return Err(Error::Capability(format!(
                "domain size {size} exceeds the configured maximum {limit}"
            )));
        }
        Ok(Domain { size })
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn elements(self) -> impl Iterator<Item = u8> {
        (0..self.size).map(|a| a as u8)
    }

    /// Number of `arity`-tuples, or a capability error if the dense table would be too large.
    pub fn tuple_count(self, arity: usize) -> Result<usize> {
        let mut n: usize = 1;
        for _ in 0..arity {
            n = n
                .checked_mul(self.size)
                .filter(|&n| n <= MAX_TABLE_CELLS)
                .ok_or_else(|| {
                    Error::Capability(format!(
                        "{arity}-tuples over a {}-element domain exceed the table limit",
                        self.size
                    ))
                })?;
        }
        Ok(n)
    }

    /// Leftmost-major index: the first coordinate is the most significant digit.
    pub fn encode(self, tuple: &[u8]) -> usize {
        tuple
            .iter()
            .fold(0usize, |acc, &a| acc * self.size + a as usize)
    }

    pub fn decode(self, mut index: usize, arity: usize) -> Vec<u8> {
        let mut out = vec![0u8; arity];
        for slot in out.iter_mut().rev() {
            *slot = (index % self.size) as u8;
            index /= self.size;
        }
        out
    }

    pub fn decode_into(self, mut index: usize, out: &mut [u8]) {
        for slot in out.iter_mut().rev() {
            *slot = (index % self.size) as u8;
            index /= self.size;
        }
    }

    pub fn contains(self, a: u8) -> bool {
        (a as usize) < self.size
    }

    pub(crate) fn check_tuple(self, tuple: &[u8]) -> Result<()> {
        match tuple.iter().find(|&&a| !self.contains(a)) {
            Some(a) => Err(Error::Argument(format!(
                "element {a} outside a domain of size {}",
                self.size
            ))),
            None => Ok(()),
        }
    }
}

/// Steps `t` to the next tuple in index order; returns false after the last one.
pub fn advance(t: &mut [u8], size: usize) -> bool {
    for slot in t.iter_mut().rev() {
        *slot += 1;
        if (*slot as usize) < size {
            return true;
        }
        *slot = 0;
    }
    false
}

/// All `arity`-tuples of the domain in index order.
pub fn all_tuples(domain: Domain, arity: usize) -> impl Iterator<Item = Vec<u8>> {
    let count = domain.size().pow(arity as u32);
    (0..count).map(move |i| domain.decode(i, arity))
}
