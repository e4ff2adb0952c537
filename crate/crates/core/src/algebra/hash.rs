use sha2::{Digest, Sha256};

use super::Scalar;

/// Output length of the message hash in bits.
pub const HASH_BITS: usize = 256;

const DST_BITS: &[u8] = b"podchain/hash-to-bits/v1";
const DST_ATTR: &[u8] = b"podchain/attribute/v1";
const DST_THETA: &[u8] = b"podchain/default-attribute/v1";

/// Plain SHA-256.
pub fn digest(data: &[u8]) -> [u8; 32] {
    Sha256::digest(data).into()
}

/// `H: {0,1}* -> {0,1}^bits`, most significant bit of each byte first.
/// Longer outputs are produced by counter-mode expansion.
pub fn hash_to_bits(data: &[u8], bits: usize) -> Vec<bool> {
    let blocks = bits.div_ceil(256);
    let mut out = Vec::with_capacity(blocks * 256);
    for i in 0..blocks as u32 {
        let mut h = Sha256::new();
        h.update(DST_BITS);
        h.update(i.to_be_bytes());
        h.update(data);
        for byte in h.finalize() {
            out.extend((0..8).rev().map(|k| (byte >> k) & 1 == 1));
        }
    }
    out.truncate(bits);
    out
}

/// Wide (512-bit) hash reduced into `Z_q`, domain separated by `domain`.
pub fn hash_to_scalar(domain: &[u8], data: &[u8]) -> Scalar {
    let mut wide = Vec::with_capacity(64);
    for i in 0u8..2 {
        let mut h = Sha256::new();
        h.update((domain.len() as u32).to_be_bytes());
        h.update(domain);
        h.update([i]);
        h.update(data);
        wide.extend_from_slice(&h.finalize());
    }
    Scalar::from_bytes_reduced(&wide)
}

/// The reserved default attribute appended to every signing set.
pub fn default_attribute() -> Scalar {
    hash_to_scalar(DST_THETA, b"theta")
}

/// Maps an attribute label into `Z*_q \ {theta}`, resampling with a counter
/// on the (negligible) chance of hitting zero or the default attribute.
pub fn hash_to_attribute(label: &[u8]) -> Scalar {
    let theta = default_attribute();
    let mut ctr = 0u32;
    loop {
        let mut input = Vec::with_capacity(label.len() + 4);
        input.extend_from_slice(&ctr.to_be_bytes());
        input.extend_from_slice(label);
        let s = hash_to_scalar(DST_ATTR, &input);
        if !s.is_zero() && s != theta {
            return s;
        }
        ctr += 1;
    }
}
