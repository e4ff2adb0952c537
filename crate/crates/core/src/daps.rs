//! Double-authentication-preventing signatures.
//!
//! A Schnorr-style signature whose nonce is derived from the secret key and
//! the address, so every signature on one address shares the commitment
//! `R`. Two signatures on different payloads for the same address give two
//! linear equations in the secret key, which [`daps_extract`] solves.

use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::algebra::{
    hash_to_scalar, multi_exp, AlgebraError, Encoder, GroupElement, Scalar, G1_BYTES, SCALAR_BYTES,
};

const NONCE_DOMAIN: &[u8] = b"podchain/daps/nonce/v1";
const CHALLENGE_DOMAIN: &[u8] = b"podchain/daps/challenge/v1";

/// Encoded signature length: compressed `R` followed by `z`.
pub const DAPS_SIGNATURE_BYTES: usize = G1_BYTES + SCALAR_BYTES;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DapsError {
    #[error("address must not be empty")]
    EmptyAddress,
    #[error("payloads are identical, nothing to extract")]
    NoConflict,
    #[error("signatures do not share an address commitment")]
    AddressMismatch,
    #[error("extraction failed: {0}")]
    ExtractionFailure(&'static str),
    #[error(transparent)]
    Encoding(#[from] AlgebraError),
}

/// The common reference string: only the group description, which is fixed
/// by the backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DapsParams {
    g: GroupElement,
}

impl DapsParams {
    pub fn generator(&self) -> &GroupElement {
        &self.g
    }
}

impl Default for DapsParams {
    fn default() -> Self {
        daps_setup()
    }
}

pub fn daps_setup() -> DapsParams {
    DapsParams {
        g: GroupElement::generator(),
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct DapsKeypair {
    sk: Scalar,
    pk: GroupElement,
}

impl std::fmt::Debug for DapsKeypair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DapsKeypair")
            .field("pk", &self.pk)
            .finish_non_exhaustive()
    }
}

impl DapsKeypair {
    pub fn from_secret(params: &DapsParams, sk: Scalar) -> Self {
        DapsKeypair {
            pk: params.g.pow(&sk),
            sk,
        }
    }

    pub fn sk(&self) -> &Scalar {
        &self.sk
    }

    pub fn pk(&self) -> &GroupElement {
        &self.pk
    }
}

/// The subject a signature authenticates. Signing two payloads under one
/// address exposes the key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DapsAddress(Vec<u8>);

impl DapsAddress {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self, DapsError> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(DapsError::EmptyAddress);
        }
        Ok(DapsAddress(bytes))
    }

    /// `pk_t || D_id`, the session address of the delivery protocol.
    pub fn session(pk_t: &GroupElement, update_id: &[u8; 32]) -> Self {
        let mut bytes = pk_t.to_bytes().to_vec();
        bytes.extend_from_slice(update_id);
        DapsAddress(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DapsSignature {
    r: GroupElement,
    z: Scalar,
}

impl DapsSignature {
    pub fn from_parts(r: GroupElement, z: Scalar) -> Self {
        DapsSignature { r, z }
    }

    pub fn commitment(&self) -> &GroupElement {
        &self.r
    }

    pub fn response(&self) -> &Scalar {
        &self.z
    }

    pub fn to_bytes(&self) -> [u8; DAPS_SIGNATURE_BYTES] {
        let mut out = [0u8; DAPS_SIGNATURE_BYTES];
        out[..G1_BYTES].copy_from_slice(&self.r.to_bytes());
        out[G1_BYTES..].copy_from_slice(&self.z.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DapsError> {
        if bytes.len() != DAPS_SIGNATURE_BYTES {
            return Err(AlgebraError::InvalidEncoding("DAPS signature length").into());
        }
        Ok(DapsSignature {
            r: GroupElement::from_bytes(&bytes[..G1_BYTES])?,
            z: Scalar::from_bytes(&bytes[G1_BYTES..])?,
        })
    }
}

fn nonce(sk: &Scalar, addr: &DapsAddress) -> Scalar {
    let mut enc = Encoder::new();
    enc.scalar(sk).bytes(addr.as_bytes());
    hash_to_scalar(NONCE_DOMAIN, &enc.finish())
}

fn challenge(r: &GroupElement, addr: &DapsAddress, payload: &[u8]) -> Scalar {
    let mut enc = Encoder::new();
    enc.point(r).bytes(addr.as_bytes()).bytes(payload);
    hash_to_scalar(CHALLENGE_DOMAIN, &enc.finish())
}

pub fn daps_kgen<R: RngCore + CryptoRng>(params: &DapsParams, rng: &mut R) -> DapsKeypair {
    DapsKeypair::from_secret(params, Scalar::random_nonzero(rng))
}

pub fn daps_sign(
    params: &DapsParams,
    sk: &Scalar,
    addr: &DapsAddress,
    payload: &[u8],
) -> DapsSignature {
    let k = nonce(sk, addr);
    let r = params.g.pow(&k);
    let c = challenge(&r, addr, payload);
    DapsSignature { r, z: k + *sk * c }
}

/// Accepts iff `g^z == R * pk^c` with `c = H(R || addr || payload)`.
pub fn daps_verify(
    params: &DapsParams,
    pk: &GroupElement,
    addr: &DapsAddress,
    payload: &[u8],
    sig: &DapsSignature,
) -> bool {
    let c = challenge(&sig.r, addr, payload);
    // g^z * pk^-c == R
    multi_exp(&[params.g, *pk], &[sig.z, -c]).expect("two terms") == sig.r
}

/// Recovers the secret key from two signatures on distinct payloads under
/// one address.
pub fn daps_extract(
    params: &DapsParams,
    pk: &GroupElement,
    addr: &DapsAddress,
    first: (&[u8], &DapsSignature),
    second: (&[u8], &DapsSignature),
) -> Result<Scalar, DapsError> {
    let (p1, s1) = first;
    let (p2, s2) = second;
    if p1 == p2 {
        return Err(DapsError::NoConflict);
    }
    if s1.r != s2.r {
        return Err(DapsError::AddressMismatch);
    }
    if !daps_verify(params, pk, addr, p1, s1) || !daps_verify(params, pk, addr, p2, s2) {
        return Err(DapsError::ExtractionFailure("signature does not verify"));
    }
    let c1 = challenge(&s1.r, addr, p1);
    let c2 = challenge(&s2.r, addr, p2);
    let inv = (c1 - c2)
        .inverse()
        .ok_or(DapsError::ExtractionFailure("challenge collision"))?;
    let sk = (s1.z - s2.z) * inv;
    if params.g.pow(&sk) != *pk {
        return Err(DapsError::ExtractionFailure("recovered key does not match"));
    }
    Ok(sk)
}
