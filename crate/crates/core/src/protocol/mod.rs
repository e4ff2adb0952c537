//! The four protocol roles and the message trace between them.
//!
//! Data moves between actors by direct calls; every hop is also recorded in
//! a [`Trace`] so a run can be replayed and inspected.

mod actors;
mod trace;

pub use actors::{
    DeliveryBundle, Device, Gateway, GatewaySession, TransmissionNode, UpdatePackage, Vendor,
};
pub use trace::{Trace, TraceEntry};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::daps::DapsError;
use crate::ledger::LedgerError;
use crate::oabs::OabsError;
use crate::payload::CipherError;
use crate::policy::PolicyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("vendor attestation over (C, D_id) does not verify")]
    Integrity,
    #[error("unknown update {0}")]
    NotFound(String),
    #[error("session declined: {0}")]
    SessionDeclined(&'static str),
    #[error("session aborted: {0}")]
    Aborted(&'static str),
    #[error("decrypted update does not match its identifier")]
    DigestMismatch,
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Oabs(#[from] OabsError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Cipher(#[from] CipherError),
    #[error(transparent)]
    Daps(#[from] DapsError),
}

/// Behaviour injected into a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Adversary {
    Honest,
    /// The node resubmits its first DAPS signature instead of signing the
    /// claim.
    NodeSkipsDelta2,
    /// The device never completes the attribute signature.
    DeviceWithholdsGamma,
    /// The node never registers with the vendor.
    UnregisteredNode,
    /// The node submits its claim after the deadline.
    LateClaim,
}

impl Adversary {
    pub const ALL: [Adversary; 5] = [
        Adversary::Honest,
        Adversary::NodeSkipsDelta2,
        Adversary::DeviceWithholdsGamma,
        Adversary::UnregisteredNode,
        Adversary::LateClaim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Adversary::Honest => "honest",
            Adversary::NodeSkipsDelta2 => "node-skips-delta2",
            Adversary::DeviceWithholdsGamma => "device-withholds-gamma",
            Adversary::UnregisteredNode => "unregistered-node",
            Adversary::LateClaim => "late-claim",
        }
    }
}

impl std::fmt::Display for Adversary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Adversary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Adversary::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Adversary::ALL.iter().map(|a| a.name()).collect();
                format!(
                    "unknown adversary {s:?}; expected one of {}",
                    names.join(", ")
                )
            })
    }
}
