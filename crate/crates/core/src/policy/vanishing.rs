use crate::algebra::Scalar;

use super::{AttributeSet, PolicyError};

/// Coefficients `c_1..c_n` of `P(X) = prod_{w in W ∪ {theta}} (X - w)`, with
/// `c_j` the coefficient of `X^{j-1}` and zero padding above degree `|W|+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingCoefficients {
    c: Vec<Scalar>,
}

impl VanishingCoefficients {
    pub fn new(w: &AttributeSet, theta: &Scalar, n: usize) -> Result<Self, PolicyError> {
        if w.len() + 2 > n {
            return Err(PolicyError::Capacity {
                size: w.len(),
                max: n.saturating_sub(2),
            });
        }
        let mut c = vec![Scalar::zero(); n];
        c[0] = Scalar::one();
        for (degree, root) in w
            .as_slice()
            .iter()
            .chain(std::iter::once(theta))
            .enumerate()
        {
            // multiply by (X - root)
            for j in (0..=degree + 1).rev() {
                let shifted = if j > 0 { c[j - 1] } else { Scalar::zero() };
                c[j] = shifted - *root * c[j];
            }
        }
        Ok(VanishingCoefficients { c })
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.c
    }

    /// `sum_j c_j x^{j-1}`.
    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        self.c
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, cj| acc * x + cj)
    }
}
