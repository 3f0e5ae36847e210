use super::digest::Canonical;

/// Unit-size transaction. Fees are integer token units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transaction {
    pub id: u64,
    pub fee: u64,
    pub created_at: f64,
}

impl Canonical for Transaction {
    fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.id.to_le_bytes());
        out.extend_from_slice(&self.fee.to_le_bytes());
        out.extend_from_slice(&self.created_at.to_bits().to_le_bytes());
    }
}
