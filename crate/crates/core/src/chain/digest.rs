use std::fmt;

use sha2::{Digest, Sha256};

/// SHA-256 output.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Hash256(pub [u8; 32]);

impl Hash256 {
    pub const ZERO: Hash256 = Hash256([0; 32]);

    pub fn of_bytes(bytes: &[u8]) -> Self {
        Hash256(Sha256::digest(bytes).into())
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl fmt::Debug for Hash256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hash256({self})")
    }
}

impl fmt::Display for Hash256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// Canonical byte encoding: fixed-width little-endian fields in declaration
/// order. Floats are encoded by their IEEE-754 bit pattern.
pub trait Canonical {
    fn write_canonical(&self, out: &mut Vec<u8>);

    fn canonical_bytes(&self) -> Vec<u8> {
        let mut v = Vec::new();
        self.write_canonical(&mut v);
        v
    }

    fn digest(&self) -> Hash256 {
        Hash256::of_bytes(&self.canonical_bytes())
    }
}

impl Canonical for Hash256 {
    fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.0);
    }
}

impl Canonical for [u8] {
    fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(self);
    }
}

impl Canonical for u64 {
    fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.to_le_bytes());
    }
}

/// Merkle root over the canonical digests of `items`.
///
/// Leaves are `H(item)`, inner nodes `H(left || right)`; an odd node at the
/// end of a level is paired with itself. A single item gives `H(item)` and
/// the empty list gives `H("")`.
pub fn merkle_root<T: Canonical + ?Sized>(items: &[&T]) -> Hash256 {
    merkle_root_of_leaves(items.iter().map(|x| x.digest()).collect())
}

pub fn merkle_root_of_leaves(mut level: Vec<Hash256>) -> Hash256 {
    if level.is_empty() {
        return Hash256::of_bytes(b"");
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            let l = pair[0];
            let r = *pair.get(1).unwrap_or(&l);
            let mut buf = [0u8; 64];
            buf[..32].copy_from_slice(&l.0);
            buf[32..].copy_from_slice(&r.0);
            next.push(Hash256::of_bytes(&buf));
        }
        level = next;
    }
    level[0]
}
