//! Hybrid ElGamal: `eph = g^k`, shared point `pk^k`, keystream from counter
//! mode SHA-256 over the shared point, body XOR-masked, tag keyed over the
//! plaintext.
//!
//! File layout (all integers big-endian):
//!
//! ```text
//! "PODC" | version (1 byte) | eph (48) | tag (32) | body length (u64) | body
//! ```

use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{GroupElement, Scalar, G1_BYTES};

pub const CIPHERTEXT_MAGIC: &[u8; 4] = b"PODC";
pub const CIPHERTEXT_VERSION: u8 = 1;
const HEADER_BYTES: usize = 4 + 1 + G1_BYTES + 32 + 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CipherError {
    #[error("integrity tag mismatch")]
    TagMismatch,
    #[error("malformed ciphertext: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridCiphertext {
    ephemeral: GroupElement,
    body: Vec<u8>,
    tag: [u8; 32],
}

impl HybridCiphertext {
    pub fn ephemeral(&self) -> &GroupElement {
        &self.ephemeral
    }

    pub fn body(&self) -> &[u8] {
        &self.body
    }

    pub fn body_mut(&mut self) -> &mut Vec<u8> {
        &mut self.body
    }

    pub fn tag(&self) -> &[u8; 32] {
        &self.tag
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_BYTES + self.body.len());
        out.extend_from_slice(CIPHERTEXT_MAGIC);
        out.push(CIPHERTEXT_VERSION);
        out.extend_from_slice(&self.ephemeral.to_bytes());
        out.extend_from_slice(&self.tag);
        out.extend_from_slice(&(self.body.len() as u64).to_be_bytes());
        out.extend_from_slice(&self.body);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CipherError> {
        if bytes.len() < HEADER_BYTES {
            return Err(CipherError::Malformed("truncated header"));
        }
        if &bytes[..4] != CIPHERTEXT_MAGIC {
            return Err(CipherError::Malformed("bad magic"));
        }
        if bytes[4] != CIPHERTEXT_VERSION {
            return Err(CipherError::Malformed("unsupported version"));
        }
        let mut at = 5;
        let ephemeral = GroupElement::from_bytes(&bytes[at..at + G1_BYTES])
            .map_err(|_| CipherError::Malformed("ephemeral point"))?;
        at += G1_BYTES;
        let tag: [u8; 32] = bytes[at..at + 32].try_into().expect("32 bytes");
        at += 32;
        let len = u64::from_be_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
        at += 8;
        if (bytes.len() - at) as u64 != len {
            return Err(CipherError::Malformed("body length"));
        }
        Ok(HybridCiphertext {
            ephemeral,
            body: bytes[at..].to_vec(),
            tag,
        })
    }
}

fn apply_keystream(shared: &GroupElement, data: &mut [u8]) {
    let seed = shared.to_bytes();
    for (counter, chunk) in data.chunks_mut(32).enumerate() {
        let block = Sha256::new()
            .chain_update(b"podchain/kem/stream/v1")
            .chain_update(seed)
            .chain_update((counter as u64).to_be_bytes())
            .finalize();
        for (b, k) in chunk.iter_mut().zip(block) {
            *b ^= k;
        }
    }
}

fn tag(shared: &GroupElement, plaintext: &[u8]) -> [u8; 32] {
    Sha256::new()
        .chain_update(b"podchain/kem/tag/v1")
        .chain_update(shared.to_bytes())
        .chain_update((plaintext.len() as u64).to_be_bytes())
        .chain_update(plaintext)
        .finalize()
        .into()
}

pub fn encrypt<R: RngCore + CryptoRng>(
    pk: &GroupElement,
    plaintext: &[u8],
    rng: &mut R,
) -> HybridCiphertext {
    let k = Scalar::random_nonzero(rng);
    let ephemeral = GroupElement::generator().pow(&k);
    let shared = pk.pow(&k);
    let mut body = plaintext.to_vec();
    apply_keystream(&shared, &mut body);
    HybridCiphertext {
        ephemeral,
        body,
        tag: tag(&shared, plaintext),
    }
}

pub fn decrypt(sk: &Scalar, c: &HybridCiphertext) -> Result<Vec<u8>, CipherError> {
    let shared = c.ephemeral.pow(sk);
    let mut plaintext = c.body.clone();
    apply_keystream(&shared, &mut plaintext);
    if tag(&shared, &plaintext) != c.tag {
        return Err(CipherError::TagMismatch);
    }
    Ok(plaintext)
}
