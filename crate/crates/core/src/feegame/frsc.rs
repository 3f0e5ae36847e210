//! Fee-redistribution contracts in integer token units.
//!
//! Fractions (`rho`, the fee split) are held in parts per billion so every
//! update is exact integer arithmetic. `nu / lambda` is floor division; the
//! remainder stays in the contract.

use serde::{Deserialize, Serialize};

use super::FeeGameError;

pub const PPB: u64 = 1_000_000_000;

/// Converts a fraction in `[0, 1]` to parts per billion.
pub fn to_ppb(x: f64) -> u64 {
    (x * PPB as f64).round() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frsc {
    pub nu: u64,
    pub lambda: u64,
    pub rho_ppb: u64,
}

impl Frsc {
    /// `nu / lambda`, floored.
    pub fn claim(&self) -> u64 {
        self.nu / self.lambda
    }
}

/// Split of block fees between the miner (`m`) and the contracts (`cdep`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeeSplit {
    pub m_ppb: u64,
    pub cdep_ppb: u64,
}

impl FeeSplit {
    pub fn from_cdep(cdep: f64) -> Result<Self, FeeGameError> {
        if !(0.0..=1.0).contains(&cdep) {
            return Err(FeeGameError::Invalid {
                field: "cdep".into(),
                reason: format!("must be in [0, 1], got {cdep}"),
            });
        }
        let cdep_ppb = to_ppb(cdep);
        Ok(Self {
            m_ppb: PPB - cdep_ppb,
            cdep_ppb,
        })
    }

    /// All fees to the miner.
    pub fn none() -> Self {
        Self { m_ppb: PPB, cdep_ppb: 0 }
    }

    /// Portion of `fees` deposited into contracts, floored.
    pub fn deposit(&self, fees: u64) -> u64 {
        (fees as u128 * self.cdep_ppb as u128 / PPB as u128) as u64
    }
}

/// Converts `(lambda, rho)` pairs to ppb, checking `sum(rho) = 1` to within
/// 1e-12 and `lambda >= 1`. Rounding slack goes to the last contract.
pub fn ratios_to_ppb(configs: &[(u64, f64)]) -> Result<Vec<(u64, u64)>, FeeGameError> {
    if configs.is_empty() {
        return Ok(Vec::new());
    }
    let sum: f64 = configs.iter().map(|c| c.1).sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(FeeGameError::RatioSum(sum));
    }
    let mut out = Vec::with_capacity(configs.len());
    let mut acc = 0u64;
    for (i, &(lambda, rho)) in configs.iter().enumerate() {
        if lambda == 0 {
            return Err(FeeGameError::Invalid {
                field: format!("frscs[{i}].lambda"),
                reason: "must be at least 1".into(),
            });
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(FeeGameError::Invalid {
                field: format!("frscs[{i}].rho"),
                reason: format!("must be in [0, 1], got {rho}"),
            });
        }
        let r = if i + 1 == configs.len() {
            PPB.saturating_sub(acc)
        } else {
            to_ppb(rho)
        };
        acc += r;
        out.push((lambda, r));
    }
    Ok(out)
}

/// Genesis contracts: `nu = mean_fees * cdep * rho * lambda`, floored.
pub fn init_frscs(mean_fees: u64, cdep_ppb: u64, configs: &[(u64, u64)]) -> Result<Vec<Frsc>, FeeGameError> {
    if !configs.is_empty() {
        let s: u64 = configs.iter().map(|c| c.1).sum();
        if s != PPB {
            return Err(FeeGameError::RatioSum(s as f64 / PPB as f64));
        }
    }
    configs
        .iter()
        .map(|&(lambda, rho_ppb)| {
            if lambda == 0 {
                return Err(FeeGameError::Invalid {
                    field: "frscs.lambda".into(),
                    reason: "must be at least 1".into(),
                });
            }
            let num = mean_fees as u128 * cdep_ppb as u128 * rho_ppb as u128 * lambda as u128;
            let nu = num / (PPB as u128 * PPB as u128);
            Ok(Frsc {
                nu: u64::try_from(nu).map_err(|_| FeeGameError::Overflow)?,
                lambda,
                rho_ppb,
            })
        })
        .collect()
}

/// Sum of per-contract claims.
pub fn next_claim(frscs: &[Frsc]) -> u64 {
    frscs.iter().map(Frsc::claim).sum()
}

/// Result of paying out one block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockPayout {
    /// Total paid to the block's miner.
    pub reward_t: u64,
    /// Paid out of the contracts.
    pub from_contracts: u64,
    /// Fees paid to the miner directly.
    pub instant: u64,
    /// Fees deposited into the contracts.
    pub deposit: u64,
}

/// Pays the block's miner and updates each contract:
/// `nu <- nu - nu/lambda + deposit * rho`. The last contract takes the
/// rounding remainder of the deposit so tokens are conserved exactly.
pub fn apply_block(frscs: &mut [Frsc], block_fees: u64, split: &FeeSplit) -> BlockPayout {
    let from_contracts = next_claim(frscs);
    let deposit = if frscs.is_empty() { 0 } else { split.deposit(block_fees) };
    let instant = block_fees - deposit;
    let mut left = deposit;
    let n = frscs.len();
    for (i, f) in frscs.iter_mut().enumerate() {
        let d = if i + 1 == n {
            left
        } else {
            (deposit as u128 * f.rho_ppb as u128 / PPB as u128) as u64
        };
        left -= d;
        f.nu = f.nu - f.claim() + d;
    }
    BlockPayout {
        reward_t: from_contracts + instant,
        from_contracts,
        instant,
        deposit,
    }
}

/// `sum(rho * lambda)` as an exact ratio `(numerator, PPB)`.
pub fn effective_lambda_ppb(frscs: &[Frsc]) -> u128 {
    frscs.iter().map(|f| f.rho_ppb as u128 * f.lambda as u128).sum()
}

pub fn effective_lambda(frscs: &[Frsc]) -> f64 {
    effective_lambda_ppb(frscs) as f64 / PPB as f64
}
