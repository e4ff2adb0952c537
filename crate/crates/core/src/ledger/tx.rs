use rand::{CryptoRng, RngCore};
use serde::Serialize;

use crate::algebra::{Encoder, GroupElement};
use crate::daps::DapsSignature;
use crate::oabs::OabsSignature;
use crate::payload::{
    ledger_sign, ledger_verify, LedgerKeypair, LedgerSignature, LEDGER_SIGNATURE_BYTES,
};

use super::contract::DeployRequest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TxKind {
    Genesis,
    Publish,
    Claim,
    Withdraw,
    Transfer,
}

impl TxKind {
    fn tag(self) -> u64 {
        self as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum TxPayload {
    /// Deploys a proof-of-delivery contract funded by the sender.
    Publish(DeployRequest),
    /// Claims the incentive for one delivery; the payee is the sender.
    Claim {
        contract: u64,
        pk_t: GroupElement,
        oabs: OabsSignature,
        daps: DapsSignature,
    },
    Withdraw {
        contract: u64,
    },
    Transfer {
        to: GroupElement,
        amount: u64,
    },
}

impl TxPayload {
    pub fn kind(&self) -> TxKind {
        match self {
            TxPayload::Publish(_) => TxKind::Publish,
            TxPayload::Claim { .. } => TxKind::Claim,
            TxPayload::Withdraw { .. } => TxKind::Withdraw,
            TxPayload::Transfer { .. } => TxKind::Transfer,
        }
    }

    fn encode_into(&self, enc: &mut Encoder) {
        enc.u64(self.kind().tag());
        match self {
            TxPayload::Publish(req) => req.encode_into(enc),
            TxPayload::Claim {
                contract,
                pk_t,
                oabs,
                daps,
            } => {
                enc.u64(*contract).point(pk_t);
                oabs.encode_into(enc);
                enc.bytes(&daps.to_bytes());
            }
            TxPayload::Withdraw { contract } => {
                enc.u64(*contract);
            }
            TxPayload::Transfer { to, amount } => {
                enc.point(to).u64(*amount);
            }
        }
    }
}

/// A signed transaction. The signature is kept as raw bytes so that
/// tampered encodings reach the ledger and are rejected there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub sender: GroupElement,
    pub nonce: u64,
    pub payload: TxPayload,
    pub signature: [u8; LEDGER_SIGNATURE_BYTES],
}

impl Transaction {
    pub fn signing_bytes(sender: &GroupElement, nonce: u64, payload: &TxPayload) -> Vec<u8> {
        let mut enc = Encoder::new();
        enc.bytes(b"podchain/tx/v1").point(sender).u64(nonce);
        payload.encode_into(&mut enc);
        enc.finish()
    }

    pub fn sign<R: RngCore + CryptoRng>(
        kp: &LedgerKeypair,
        nonce: u64,
        payload: TxPayload,
        rng: &mut R,
    ) -> Self {
        let msg = Self::signing_bytes(kp.pk(), nonce, &payload);
        Transaction {
            sender: *kp.pk(),
            nonce,
            signature: ledger_sign(kp, &msg, rng).to_bytes(),
            payload,
        }
    }

    pub fn kind(&self) -> TxKind {
        self.payload.kind()
    }

    pub fn verify_signature(&self) -> bool {
        let msg = Self::signing_bytes(&self.sender, self.nonce, &self.payload);
        LedgerSignature::from_bytes(&self.signature)
            .map(|sig| ledger_verify(&self.sender, &msg, &sig))
            .unwrap_or(false)
    }
}
