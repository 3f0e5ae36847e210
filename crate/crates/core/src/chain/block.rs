use super::digest::{merkle_root_of_leaves, Canonical, Hash256};
use super::tx::Transaction;

/// Size of a full header on the wire.
pub const STRONG_HEADER_BYTES: usize = 100;
/// Size of a weak header once the fields it shares with the strong header
/// (previous hash, target, version) are dropped.
pub const WEAK_HEADER_BYTES: usize = 60;

/// 20-byte coinbase address. Simulated miners use their numeric id in the
/// first eight bytes, little-endian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coinbase(pub [u8; 20]);

impl Coinbase {
    pub fn from_miner(id: usize) -> Self {
        let mut a = [0u8; 20];
        a[..8].copy_from_slice(&(id as u64).to_le_bytes());
        Coinbase(a)
    }

    pub fn miner(&self) -> usize {
        u64::from_le_bytes(self.0[..8].try_into().unwrap()) as usize
    }
}

/// Block header. Targets and `pow_value` are fractions of the maximum
/// target, so `T_max = 1.0`. `pow_value` is the simulated hash outcome drawn
/// uniformly from `[0, 1)` by the lottery: a header is strong iff
/// `pow_value < T_s` and weak iff `T_s <= pow_value < T_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockHeader {
    pub prev_hash: Hash256,
    pub target: f64,
    pub nonce: u64,
    pub timestamp: f64,
    pub tx_root: Hash256,
    pub coinbase: Coinbase,
    pub pow_value: f64,
}

impl Canonical for BlockHeader {
    fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.prev_hash.0);
        out.extend_from_slice(&self.target.to_bits().to_le_bytes());
        out.extend_from_slice(&self.nonce.to_le_bytes());
        out.extend_from_slice(&self.timestamp.to_bits().to_le_bytes());
        out.extend_from_slice(&self.tx_root.0);
        out.extend_from_slice(&self.coinbase.0);
        out.extend_from_slice(&self.pow_value.to_bits().to_le_bytes());
    }
}

impl BlockHeader {
    pub fn hash(&self) -> Hash256 {
        self.digest()
    }

    pub fn is_strong(&self, t_s: f64) -> bool {
        self.pow_value < t_s
    }

    pub fn is_weak(&self, t_s: f64, t_w: f64) -> bool {
        t_s <= self.pow_value && self.pow_value < t_w
    }
}

/// Digest committing to the weak headers in stored order.
pub fn binding_digest(weak: &[BlockHeader]) -> Hash256 {
    let mut buf = Vec::with_capacity(weak.len() * 128);
    for h in weak {
        h.write_canonical(&mut buf);
    }
    Hash256::of_bytes(&buf)
}

/// Merkle root over transaction digests.
pub fn tx_root(txs: &[Transaction]) -> Hash256 {
    merkle_root_of_leaves(txs.iter().map(|t| t.digest()).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub header: BlockHeader,
    pub weak_headers: Vec<BlockHeader>,
    pub txs: Vec<Transaction>,
    pub binding_digest: Hash256,
}

impl Block {
    /// Builds a block and fills in `tx_root` and `binding_digest`.
    pub fn assemble(mut header: BlockHeader, weak_headers: Vec<BlockHeader>, txs: Vec<Transaction>) -> Self {
        header.tx_root = tx_root(&txs);
        let binding_digest = binding_digest(&weak_headers);
        Block {
            header,
            weak_headers,
            txs,
            binding_digest,
        }
    }

    pub fn hash(&self) -> Hash256 {
        self.header.hash()
    }

    /// Reported header bytes: one full header plus compact weak headers.
    pub fn header_bytes(&self) -> usize {
        STRONG_HEADER_BYTES + WEAK_HEADER_BYTES * self.weak_headers.len()
    }
}
