//! Schnorr signatures over the first group, standing in for the ECDSA keys
//! every ledger participant holds. A signature is the pair `(e, s)` with
//! `R = g^k`, `e = H(R || PK || msg)`, `s = k + e * SK`.

use rand::{CryptoRng, RngCore};

use crate::algebra::{hash_to_scalar, multi_exp, Encoder, GroupElement, Scalar, SCALAR_BYTES};

const DOMAIN: &[u8] = b"podchain/ledger-sig/v1";

pub const LEDGER_SIGNATURE_BYTES: usize = 2 * SCALAR_BYTES;

#[derive(Clone, PartialEq, Eq)]
pub struct LedgerKeypair {
    sk: Scalar,
    pk: GroupElement,
}

impl std::fmt::Debug for LedgerKeypair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LedgerKeypair")
            .field("pk", &self.pk)
            .finish_non_exhaustive()
    }
}

impl LedgerKeypair {
    pub fn sk(&self) -> &Scalar {
        &self.sk
    }

    pub fn pk(&self) -> &GroupElement {
        &self.pk
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LedgerSignature {
    e: Scalar,
    s: Scalar,
}

impl LedgerSignature {
    pub fn to_bytes(&self) -> [u8; LEDGER_SIGNATURE_BYTES] {
        let mut out = [0u8; LEDGER_SIGNATURE_BYTES];
        out[..SCALAR_BYTES].copy_from_slice(&self.e.to_bytes());
        out[SCALAR_BYTES..].copy_from_slice(&self.s.to_bytes());
        out
    }

    /// `None` for wrong lengths or non-canonical scalars.
    pub fn from_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != LEDGER_SIGNATURE_BYTES {
            return None;
        }
        Some(LedgerSignature {
            e: Scalar::from_bytes(&bytes[..SCALAR_BYTES]).ok()?,
            s: Scalar::from_bytes(&bytes[SCALAR_BYTES..]).ok()?,
        })
    }
}

fn challenge(r: &GroupElement, pk: &GroupElement, msg: &[u8]) -> Scalar {
    let mut enc = Encoder::new();
    enc.point(r).point(pk).bytes(msg);
    hash_to_scalar(DOMAIN, &enc.finish())
}

pub fn ledger_keygen<R: RngCore + CryptoRng>(rng: &mut R) -> LedgerKeypair {
    let sk = Scalar::random_nonzero(rng);
    LedgerKeypair {
        pk: GroupElement::generator().pow(&sk),
        sk,
    }
}

pub fn ledger_sign<R: RngCore + CryptoRng>(
    kp: &LedgerKeypair,
    msg: &[u8],
    rng: &mut R,
) -> LedgerSignature {
    let k = Scalar::random_nonzero(rng);
    let r = GroupElement::generator().pow(&k);
    let e = challenge(&r, &kp.pk, msg);
    LedgerSignature {
        e,
        s: k + e * kp.sk,
    }
}

pub fn ledger_verify(pk: &GroupElement, msg: &[u8], sig: &LedgerSignature) -> bool {
    // R = g^s * PK^-e
    let r = multi_exp(&[GroupElement::generator(), *pk], &[sig.s, -sig.e]).expect("two terms");
    challenge(&r, pk, msg) == sig.e
}
