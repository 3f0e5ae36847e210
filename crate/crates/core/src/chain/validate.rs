use std::collections::HashSet;

use super::block::{binding_digest, tx_root, Block, BlockHeader};

/// A failed block check. `check()` gives the validation step (1-4).
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    StrongTargetNotMet { pow_value: f64, target: f64 },
    StrongWrongParent,
    BadTimestamp(f64),
    TargetMismatch { header: f64, expected: f64 },
    TxRootMismatch,
    DuplicateTx(u64),
    BindingMismatch,
    WeakOutOfRange { index: usize, pow_value: f64 },
    WeakWrongParent { index: usize },
    WeakTargetMismatch { index: usize },
}

impl Violation {
    pub fn check(&self) -> u8 {
        use Violation::*;
        match self {
            StrongTargetNotMet { .. } | StrongWrongParent => 1,
            BadTimestamp(_) | TargetMismatch { .. } | TxRootMismatch | DuplicateTx(_) => 2,
            BindingMismatch => 3,
            WeakOutOfRange { .. } | WeakWrongParent { .. } | WeakTargetMismatch { .. } => 4,
        }
    }
}

/// Validates `block` on top of `tip`. Returns every violation found.
pub fn validate_block(block: &Block, tip: &BlockHeader, t_s: f64, t_w: f64) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    let h = &block.header;
    let tip_hash = tip.hash();

    if !h.is_strong(t_s) {
        v.push(Violation::StrongTargetNotMet {
            pow_value: h.pow_value,
            target: t_s,
        });
    }
    if h.prev_hash != tip_hash {
        v.push(Violation::StrongWrongParent);
    }

    if !(h.timestamp.is_finite() && h.timestamp >= 0.0) {
        v.push(Violation::BadTimestamp(h.timestamp));
    }
    if h.target != t_s {
        v.push(Violation::TargetMismatch {
            header: h.target,
            expected: t_s,
        });
    }
    if h.tx_root != tx_root(&block.txs) {
        v.push(Violation::TxRootMismatch);
    }
    let mut seen = HashSet::with_capacity(block.txs.len());
    for t in &block.txs {
        if !seen.insert(t.id) {
            v.push(Violation::DuplicateTx(t.id));
        }
    }

    if block.binding_digest != binding_digest(&block.weak_headers) {
        v.push(Violation::BindingMismatch);
    }

    for (index, w) in block.weak_headers.iter().enumerate() {
        if !w.is_weak(t_s, t_w) {
            v.push(Violation::WeakOutOfRange {
                index,
                pow_value: w.pow_value,
            });
        }
        if w.prev_hash != tip_hash {
            v.push(Violation::WeakWrongParent { index });
        }
        if w.target != t_s {
            v.push(Violation::WeakTargetMismatch { index });
        }
    }

    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{Coinbase, Hash256, Transaction};

    const TS: f64 = 0.25;
    const TW: f64 = 0.5;

    fn header(prev: Hash256, pow: f64, ts: f64) -> BlockHeader {
        BlockHeader {
            prev_hash: prev,
            target: TS,
            nonce: 0,
            timestamp: ts,
            tx_root: Hash256::ZERO,
            coinbase: Coinbase::from_miner(1),
            pow_value: pow,
        }
    }

    fn setup() -> (BlockHeader, Block) {
        let tip = header(Hash256::ZERO, 0.1, 0.0);
        let p = tip.hash();
        let weak = vec![header(p, 0.3, 5.0), header(p, 0.45, 6.0)];
        let txs = vec![Transaction { id: 1, fee: 3, created_at: 0.0 }];
        (tip, Block::assemble(header(p, 0.2, 10.0), weak, txs))
    }

    #[test]
    fn well_formed_block_is_ok() {
        let (tip, b) = setup();
        assert_eq!(validate_block(&b, &tip, TS, TW), Ok(()));
    }

    #[test]
    fn weak_header_on_wrong_parent() {
        let (tip, mut b) = setup();
        b.weak_headers[1].prev_hash = Hash256([9; 32]);
        b.binding_digest = binding_digest(&b.weak_headers);
        let err = validate_block(&b, &tip, TS, TW).unwrap_err();
        assert_eq!(err, vec![Violation::WeakWrongParent { index: 1 }]);
        assert_eq!(err[0].check(), 4);
    }

    #[test]
    fn tampered_weak_header_breaks_binding() {
        let (tip, mut b) = setup();
        b.weak_headers[0].timestamp = 7.0;
        let err = validate_block(&b, &tip, TS, TW).unwrap_err();
        assert_eq!(err, vec![Violation::BindingMismatch]);
        assert_eq!(err[0].check(), 3);
    }

    #[test]
    fn reports_all_violations() {
        let (tip, mut b) = setup();
        b.header.pow_value = 0.9;
        b.header.prev_hash = Hash256::ZERO;
        b.weak_headers[0].pow_value = 0.1;
        let err = validate_block(&b, &tip, TS, TW).unwrap_err();
        let checks: Vec<u8> = err.iter().map(Violation::check).collect();
        assert_eq!(checks, vec![1, 1, 3, 4]);
    }
}
