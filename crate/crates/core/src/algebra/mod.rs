//! Bilinear-group arithmetic over BLS12-381, hashing and canonical encoding.
//!
//! The protocol is written for a symmetric pairing `e: G x G -> G_T`. Here
//! `G` is realized by the first source group, and anything that must also
//! appear as a right-hand pairing input is a [`DualGroupElement`] carrying the
//! same exponent in the second source group.

mod encoding;
mod group;
mod hash;
mod scalar;
mod target;

pub use encoding::{Decoder, Encoder};
pub use group::{
    multi_exp, multi_exp_dual, multi_exp_g2, DualGroupElement, G2Element, GroupElement, DUAL_BYTES,
    G1_BYTES, G2_BYTES,
};
pub use hash::{
    default_attribute, digest, hash_to_attribute, hash_to_bits, hash_to_scalar, HASH_BITS,
};
pub use scalar::{Scalar, SCALAR_BYTES};
pub use target::{
    pair, pair_raw, pairing_product, pairing_product_prepared, PairingLeft, PreparedG2,
    TargetElement, GT_BYTES,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid encoding: {0}")]
    InvalidEncoding(&'static str),
    #[error("multi-exponentiation length mismatch: {bases} bases, {exps} exponents")]
    LengthMismatch { bases: usize, exps: usize },
}
