use std::fmt;
use std::ops::Mul;

use blstrs::{Bls12, Compress, G2Prepared, Gt};
use group::{Curve, Group};
use pairing::{MillerLoopResult, MultiMillerLoop};

use super::{AlgebraError, DualGroupElement, G2Element, GroupElement, Scalar};

/// Six base-field coordinates of 48 bytes each.
pub const GT_BYTES: usize = 288;

/// Element of the pairing target group, written multiplicatively.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct TargetElement(pub(crate) Gt);

impl TargetElement {
    pub fn identity() -> Self {
        TargetElement(Gt::identity())
    }

    /// `e(g1, g2)`.
    pub fn generator() -> Self {
        TargetElement(Gt::generator())
    }

    pub fn is_identity(&self) -> bool {
        bool::from(self.0.is_identity())
    }

    pub fn pow(&self, x: &Scalar) -> Self {
        TargetElement(self.0 * x.0)
    }

    pub fn inverse(&self) -> Self {
        TargetElement(-self.0)
    }

    /// Torus-compressed encoding (288 bytes). The identity, which has no
    /// torus representative, is encoded as all zeros; no other subgroup
    /// element compresses to zero.
    pub fn to_bytes(&self) -> Vec<u8> {
        if self.is_identity() {
            return vec![0u8; GT_BYTES];
        }
        let mut out = Vec::with_capacity(GT_BYTES);
        self.0
            .write_compressed(&mut out)
            .expect("writing to a Vec cannot fail");
        out
    }

    /// Rejects non-canonical coordinates and values outside the order-q subgroup.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        if bytes.len() != GT_BYTES {
            return Err(AlgebraError::InvalidEncoding("target element length"));
        }
        if bytes.iter().all(|b| *b == 0) {
            return Ok(Self::identity());
        }
        Gt::read_compressed(bytes)
            .map(TargetElement)
            .map_err(|_| AlgebraError::InvalidEncoding("target element"))
    }
}

impl Mul for TargetElement {
    type Output = TargetElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: TargetElement) -> TargetElement {
        TargetElement(self.0 + rhs.0)
    }
}

impl fmt::Debug for TargetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = hex::encode(&self.to_bytes()[..8]);
        write!(f, "Gt({hex}..)")
    }
}

/// Anything that can sit on the left of the pairing: a plain first-group
/// element or the left coordinate of a dual element.
pub trait PairingLeft {
    fn pairing_left(&self) -> &GroupElement;
}

impl PairingLeft for GroupElement {
    fn pairing_left(&self) -> &GroupElement {
        self
    }
}

impl PairingLeft for DualGroupElement {
    fn pairing_left(&self) -> &GroupElement {
        self.left()
    }
}

/// `e(a, b)`, emulating a symmetric pairing: `a` contributes its first-group
/// value, `b` its second-group value.
pub fn pair<A: PairingLeft + ?Sized>(a: &A, b: &DualGroupElement) -> TargetElement {
    pair_raw(a.pairing_left(), b.right())
}

pub fn pair_raw(a: &GroupElement, b: &G2Element) -> TargetElement {
    TargetElement(blstrs::pairing(&a.0.to_affine(), &b.0.to_affine()))
}

/// Second-group element with its Miller-loop lines precomputed, for inputs
/// that are paired repeatedly.
#[derive(Clone, Debug)]
pub struct PreparedG2(G2Prepared);

impl From<&G2Element> for PreparedG2 {
    fn from(b: &G2Element) -> Self {
        PreparedG2(G2Prepared::from(b.0.to_affine()))
    }
}

/// `prod e(a_i, b_i)` over prepared right-hand inputs.
pub fn pairing_product_prepared(terms: &[(GroupElement, &PreparedG2)]) -> TargetElement {
    let lefts: Vec<_> = terms.iter().map(|(a, _)| a.0.to_affine()).collect();
    let refs: Vec<_> = lefts.iter().zip(terms.iter().map(|(_, b)| &b.0)).collect();
    TargetElement(Bls12::multi_miller_loop(&refs).final_exponentiation())
}

/// `prod e(a_i, b_i)` sharing one final exponentiation.
pub fn pairing_product(terms: &[(GroupElement, G2Element)]) -> TargetElement {
    let lefts: Vec<_> = terms.iter().map(|(a, _)| a.0.to_affine()).collect();
    let rights: Vec<G2Prepared> = terms
        .iter()
        .map(|(_, b)| G2Prepared::from(b.0.to_affine()))
        .collect();
    let refs: Vec<_> = lefts.iter().zip(rights.iter()).collect();
    TargetElement(Bls12::multi_miller_loop(&refs).final_exponentiation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn bilinearity_small_exponents() {
        let g = DualGroupElement::generator();
        let lhs = pair(&g.pow(&Scalar::from_u64(2)), &g.pow(&Scalar::from_u64(3)));
        assert_eq!(lhs, pair(&g, &g).pow(&Scalar::from_u64(6)));
    }

    #[test]
    fn identity_pairs_to_identity() {
        let g = DualGroupElement::generator();
        let h = DualGroupElement::from_exponent(&Scalar::from_u64(99));
        assert!(pair(&g.pow(&Scalar::zero()), &h).is_identity());
        assert!(!pair(&g, &g).is_identity());
    }

    #[test]
    fn additive_in_exponent() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let g = DualGroupElement::generator();
        for _ in 0..5 {
            let a = Scalar::random(&mut rng);
            let b = Scalar::random(&mut rng);
            assert_eq!(
                pair(&g.pow(&a), &g) * pair(&g.pow(&b), &g),
                pair(&g.pow(&(a + b)), &g)
            );
        }
    }

    #[test]
    fn product_matches_individual_pairings() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        let terms: Vec<_> = (0..3)
            .map(|_| {
                let d = DualGroupElement::random(&mut rng);
                (GroupElement::random(&mut rng), *d.right())
            })
            .collect();
        let naive = terms.iter().fold(TargetElement::identity(), |acc, (a, b)| {
            acc * pair_raw(a, b)
        });
        assert_eq!(pairing_product(&terms), naive);
        let prepared: Vec<PreparedG2> = terms.iter().map(|(_, b)| PreparedG2::from(b)).collect();
        let with_prep: Vec<_> = terms
            .iter()
            .zip(&prepared)
            .map(|((a, _), p)| (*a, p))
            .collect();
        assert_eq!(pairing_product_prepared(&with_prep), naive);
    }

    #[test]
    fn target_encoding_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let t = TargetElement::generator().pow(&Scalar::random(&mut rng));
        assert_eq!(TargetElement::from_bytes(&t.to_bytes()).unwrap(), t);
        let id = TargetElement::identity();
        assert_eq!(TargetElement::from_bytes(&id.to_bytes()).unwrap(), id);

        let mut bad = t.to_bytes();
        bad[GT_BYTES - 1] ^= 1;
        assert!(TargetElement::from_bytes(&bad).is_err());
        assert!(TargetElement::from_bytes(&[0xffu8; GT_BYTES]).is_err());
        assert!(TargetElement::from_bytes(&[1u8; 10]).is_err());
    }
}
