//! Ledger data structures shared by the protocol models.

mod block;
mod digest;
mod mempool;
mod tx;
mod validate;

pub use block::{
    binding_digest, tx_root, Block, BlockHeader, Coinbase, STRONG_HEADER_BYTES, WEAK_HEADER_BYTES,
};
pub use digest::{merkle_root, merkle_root_of_leaves, Canonical, Hash256};
pub use mempool::{generate_batch, refill_mempool, FeeDistribution, Mempool, TxIdGen};
pub use tx::Transaction;
pub use validate::{validate_block, Violation};
