use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use ff::Field;
use rand::{CryptoRng, RngCore};

use super::AlgebraError;

/// Width in bytes of a canonical scalar encoding.
pub const SCALAR_BYTES: usize = 32;

/// An element of `Z_q`, where `q` is the prime order of the pairing groups.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct Scalar(pub(crate) blstrs::Scalar);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(blstrs::Scalar::ZERO)
    }

    pub fn one() -> Self {
        Scalar(blstrs::Scalar::ONE)
    }

    pub fn from_u64(v: u64) -> Self {
        Scalar(blstrs::Scalar::from(v))
    }

    /// Signed helper, mostly for LSSS matrices with `-1` entries.
    pub fn from_i64(v: i64) -> Self {
        let abs = Scalar::from_u64(v.unsigned_abs());
        if v < 0 {
            -abs
        } else {
            abs
        }
    }

    pub fn random<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        Scalar(blstrs::Scalar::random(rng))
    }

    /// Uniform over `Z*_q`.
    pub fn random_nonzero<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        loop {
            let s = Self::random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Reduces an arbitrary big-endian byte string modulo `q`.
    pub fn from_bytes_reduced(bytes: &[u8]) -> Self {
        let base = blstrs::Scalar::from(256u64);
        let acc = bytes.iter().fold(blstrs::Scalar::ZERO, |acc, b| {
            acc * base + blstrs::Scalar::from(u64::from(*b))
        });
        Scalar(acc)
    }

    pub fn is_zero(&self) -> bool {
        bool::from(self.0.is_zero())
    }

    pub fn inverse(&self) -> Option<Self> {
        Option::from(self.0.invert()).map(Scalar)
    }

    pub fn pow(&self, exp: u64) -> Self {
        Scalar(self.0.pow_vartime([exp]))
    }

    /// Fixed-width big-endian encoding.
    pub fn to_bytes(&self) -> [u8; SCALAR_BYTES] {
        self.0.to_bytes_be()
    }

    /// Rejects encodings of values `>= q`.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        let arr: [u8; SCALAR_BYTES] = bytes
            .try_into()
            .map_err(|_| AlgebraError::InvalidEncoding("scalar length"))?;
        Option::from(blstrs::Scalar::from_bytes_be(&arr))
            .map(Scalar)
            .ok_or(AlgebraError::InvalidEncoding("scalar out of range"))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar(0x{})", self.to_hex())
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.to_bytes().hash(state);
    }
}

// Ordering by canonical encoding, i.e. by integer value.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_bytes().cmp(&other.to_bytes())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Scalar {
    fn from(v: u64) -> Self {
        Scalar::from_u64(v)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $tra:ident, $method_assign:ident, $op:tt) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl $tra for Scalar {
            fn $method_assign(&mut self, rhs: Scalar) {
                self.0 = self.0 $op rhs.0;
            }
        }
    };
}

scalar_binop!(Add, add, AddAssign, add_assign, +);
scalar_binop!(Sub, sub, SubAssign, sub_assign, -);
scalar_binop!(Mul, mul, MulAssign, mul_assign, *);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}
