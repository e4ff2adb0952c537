//! Single-sequencer ledger with an epoch clock and the proof-of-delivery
//! contract.
//!
//! Transactions are applied immediately in submission order to the block at
//! the current height; [`LedgerState::advance_epoch`] closes the block.
//! Currency is minted only at genesis.

mod contract;
#[cfg(test)]
mod fixture;
mod state;
mod tx;

pub use contract::{claim_digest, ClaimRecord, ContractState, DeployRequest};
pub use state::{LedgerEvent, LedgerSnapshot, LedgerState, Receipt};
pub use tx::{Transaction, TxKind, TxPayload};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LedgerError {
    #[error("ledger signature rejected")]
    SignatureRejected,
    #[error("bad nonce: expected {expected}, got {got}")]
    BadNonce { expected: u64, got: u64 },
    #[error("insufficient funds: balance {balance}, needed {needed}")]
    InsufficientFunds { balance: u64, needed: u64 },
    #[error("deployment rejected: {0}")]
    Deployment(String),
    #[error("unknown contract {0}")]
    UnknownContract(u64),
    #[error("claim at epoch {now} after deadline {deadline}")]
    Expired { now: u64, deadline: u64 },
    #[error("proof rejected: {0}")]
    ProofRejected(&'static str),
    #[error("transmission node key is not registered with the contract")]
    Unregistered,
    #[error("transmission node key has already been paid")]
    ReplayRejected,
    #[error("contract has no remaining payouts")]
    Exhausted,
    #[error("withdraw at epoch {now} not after deadline {deadline}")]
    Premature { now: u64, deadline: u64 },
    #[error("caller is not the contract owner")]
    Unauthorized,
    #[error("arithmetic overflow")]
    Overflow,
}
