use std::fmt;
use std::ops::Mul;

use blstrs::{G1Affine, G1Projective, G2Affine, G2Projective};
use group::{Curve, Group};
use rand::{CryptoRng, RngCore};

use super::{pair, AlgebraError, Scalar};

pub const G1_BYTES: usize = 48;
pub const G2_BYTES: usize = 96;
pub const DUAL_BYTES: usize = G1_BYTES + G2_BYTES;

/// Element of the first source group. This is the group every signature,
/// key and ciphertext component lives in.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct GroupElement(pub(crate) G1Projective);

/// Element of the second source group; only used as the right pairing input.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct G2Element(pub(crate) G2Projective);

/// The same discrete logarithm carried in both source groups, so that an
/// element can be paired from either side as with a symmetric pairing.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct DualGroupElement {
    left: GroupElement,
    right: G2Element,
}

impl GroupElement {
    pub fn generator() -> Self {
        GroupElement(G1Projective::generator())
    }

    pub fn identity() -> Self {
        GroupElement(G1Projective::identity())
    }

    /// `g^x` for the fixed generator.
    pub fn from_exponent(x: &Scalar) -> Self {
        GroupElement(G1Projective::generator() * x.0)
    }

    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        GroupElement(G1Projective::random(rng))
    }

    pub fn is_identity(&self) -> bool {
        bool::from(self.0.is_identity())
    }

    pub fn pow(&self, x: &Scalar) -> Self {
        GroupElement(self.0 * x.0)
    }

    pub fn inverse(&self) -> Self {
        GroupElement(-self.0)
    }

    /// Compressed point encoding.
    pub fn to_bytes(&self) -> [u8; G1_BYTES] {
        self.0.to_affine().to_compressed()
    }

    /// Rejects points off the curve or outside the prime-order subgroup.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        let arr: [u8; G1_BYTES] = bytes
            .try_into()
            .map_err(|_| AlgebraError::InvalidEncoding("G1 length"))?;
        Option::<G1Affine>::from(G1Affine::from_compressed(&arr))
            .map(|p| GroupElement(p.into()))
            .ok_or(AlgebraError::InvalidEncoding("G1 point"))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }
}

impl G2Element {
    pub fn generator() -> Self {
        G2Element(G2Projective::generator())
    }

    pub fn identity() -> Self {
        G2Element(G2Projective::identity())
    }

    pub fn pow(&self, x: &Scalar) -> Self {
        G2Element(self.0 * x.0)
    }

    pub fn inverse(&self) -> Self {
        G2Element(-self.0)
    }

    pub fn to_bytes(&self) -> [u8; G2_BYTES] {
        self.0.to_affine().to_compressed()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        let arr: [u8; G2_BYTES] = bytes
            .try_into()
            .map_err(|_| AlgebraError::InvalidEncoding("G2 length"))?;
        Option::<G2Affine>::from(G2Affine::from_compressed(&arr))
            .map(|p| G2Element(p.into()))
            .ok_or(AlgebraError::InvalidEncoding("G2 point"))
    }
}

impl DualGroupElement {
    pub fn generator() -> Self {
        DualGroupElement {
            left: GroupElement::generator(),
            right: G2Element::generator(),
        }
    }

    pub fn identity() -> Self {
        DualGroupElement {
            left: GroupElement::identity(),
            right: G2Element::identity(),
        }
    }

    /// `(g1^x, g2^x)`; the only way to mint a fresh dual element.
    pub fn from_exponent(x: &Scalar) -> Self {
        DualGroupElement {
            left: GroupElement::from_exponent(x),
            right: G2Element::generator().pow(x),
        }
    }

    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        Self::from_exponent(&Scalar::random(rng))
    }

    pub fn left(&self) -> &GroupElement {
        &self.left
    }

    pub fn right(&self) -> &G2Element {
        &self.right
    }

    pub fn pow(&self, x: &Scalar) -> Self {
        DualGroupElement {
            left: self.left.pow(x),
            right: self.right.pow(x),
        }
    }

    pub fn inverse(&self) -> Self {
        DualGroupElement {
            left: self.left.inverse(),
            right: self.right.inverse(),
        }
    }

    /// `e(left, g2) == e(g1, right)`.
    pub fn is_consistent(&self) -> bool {
        pair(&self.left, &DualGroupElement::generator()) == pair(&GroupElement::generator(), self)
    }

    /// Left compressed encoding followed by right compressed encoding.
    pub fn to_bytes(&self) -> [u8; DUAL_BYTES] {
        let mut out = [0u8; DUAL_BYTES];
        out[..G1_BYTES].copy_from_slice(&self.left.to_bytes());
        out[G1_BYTES..].copy_from_slice(&self.right.to_bytes());
        out
    }

    /// Also rejects pairs whose two coordinates have different logarithms.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        if bytes.len() != DUAL_BYTES {
            return Err(AlgebraError::InvalidEncoding("dual element length"));
        }
        let left = GroupElement::from_bytes(&bytes[..G1_BYTES])?;
        let right = G2Element::from_bytes(&bytes[G1_BYTES..])?;
        let d = DualGroupElement { left, right };
        if !d.is_consistent() {
            return Err(AlgebraError::InvalidEncoding(
                "dual element coordinates disagree",
            ));
        }
        Ok(d)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = self.to_hex();
        write!(f, "G1({}..)", &hex[..16])
    }
}

impl fmt::Debug for G2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hex = hex::encode(self.to_bytes());
        write!(f, "G2({}..)", &hex[..16])
    }
}

impl fmt::Debug for DualGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dual({:?})", self.left)
    }
}

// The groups are written multiplicatively, so `a * b` is the group law and
// `pow` is exponentiation.
impl Mul for GroupElement {
    type Output = GroupElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement(self.0 + rhs.0)
    }
}

impl Mul for G2Element {
    type Output = G2Element;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: G2Element) -> G2Element {
        G2Element(self.0 + rhs.0)
    }
}

impl Mul for DualGroupElement {
    type Output = DualGroupElement;
    fn mul(self, rhs: DualGroupElement) -> DualGroupElement {
        DualGroupElement {
            left: self.left * rhs.left,
            right: self.right * rhs.right,
        }
    }
}

impl std::iter::Product for GroupElement {
    fn product<I: Iterator<Item = GroupElement>>(iter: I) -> Self {
        iter.fold(GroupElement::identity(), |a, b| a * b)
    }
}

/// `prod bases[i]^exps[i]` in the first group.
pub fn multi_exp(bases: &[GroupElement], exps: &[Scalar]) -> Result<GroupElement, AlgebraError> {
    if bases.len() != exps.len() {
        return Err(AlgebraError::LengthMismatch {
            bases: bases.len(),
            exps: exps.len(),
        });
    }
    let (pts, scalars): (Vec<G1Projective>, Vec<blstrs::Scalar>) = bases
        .iter()
        .zip(exps)
        .filter(|(_, e)| !e.is_zero())
        .map(|(b, e)| (b.0, e.0))
        .unzip();
    Ok(GroupElement(match pts.len() {
        0 => G1Projective::identity(),
        1 => pts[0] * scalars[0],
        _ => G1Projective::multi_exp(&pts, &scalars),
    }))
}

/// `prod bases[i]^exps[i]` in the second group.
pub fn multi_exp_g2(bases: &[G2Element], exps: &[Scalar]) -> Result<G2Element, AlgebraError> {
    if bases.len() != exps.len() {
        return Err(AlgebraError::LengthMismatch {
            bases: bases.len(),
            exps: exps.len(),
        });
    }
    let (pts, scalars): (Vec<G2Projective>, Vec<blstrs::Scalar>) = bases
        .iter()
        .zip(exps)
        .filter(|(_, e)| !e.is_zero())
        .map(|(b, e)| (b.0, e.0))
        .unzip();
    Ok(G2Element(match pts.len() {
        0 => G2Projective::identity(),
        1 => pts[0] * scalars[0],
        _ => G2Projective::multi_exp(&pts, &scalars),
    }))
}

/// Multi-exponentiation on both coordinates of dual elements.
pub fn multi_exp_dual(
    bases: &[DualGroupElement],
    exps: &[Scalar],
) -> Result<DualGroupElement, AlgebraError> {
    let lefts: Vec<GroupElement> = bases.iter().map(|b| b.left).collect();
    let rights: Vec<G2Element> = bases.iter().map(|b| b.right).collect();
    Ok(DualGroupElement {
        left: multi_exp(&lefts, exps)?,
        right: multi_exp_g2(&rights, exps)?,
    })
}
