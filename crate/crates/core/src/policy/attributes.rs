use crate::algebra::{default_attribute, hash_to_attribute, Decoder, Encoder, Scalar};

use super::PolicyError;

/// A signing attribute set `W`: distinct, sorted ascending, never containing
/// the default attribute, and small enough that `|W| + 2 <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttributeSet {
    attrs: Vec<Scalar>,
}

impl AttributeSet {
    /// Duplicates collapse; order of the input does not matter.
    pub fn new<I>(attrs: I, capacity: usize) -> Result<Self, PolicyError>
    where
        I: IntoIterator<Item = Scalar>,
    {
        let mut attrs: Vec<Scalar> = attrs.into_iter().collect();
        attrs.sort();
        attrs.dedup();
        let theta = default_attribute();
        if attrs.contains(&theta) {
            return Err(PolicyError::ReservedAttribute);
        }
        if attrs.iter().any(Scalar::is_zero) {
            return Err(PolicyError::InvalidStructure("zero attribute".into()));
        }
        if attrs.len() + 2 > capacity {
            return Err(PolicyError::Capacity {
                size: attrs.len(),
                max: capacity.saturating_sub(2),
            });
        }
        Ok(AttributeSet { attrs })
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S], capacity: usize) -> Result<Self, PolicyError> {
        Self::new(
            labels
                .iter()
                .map(|l| hash_to_attribute(l.as_ref().as_bytes())),
            capacity,
        )
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.attrs
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        self.attrs.binary_search(a).is_ok()
    }

    /// Count followed by each attribute, ascending.
    pub fn encode_into(&self, enc: &mut Encoder) {
        enc.u64(self.attrs.len() as u64);
        for a in &self.attrs {
            enc.scalar(a);
        }
    }

    /// Inverse of [`AttributeSet::encode_into`]. Requires strictly ascending
    /// order so every set has exactly one encoding; capacity is left to the
    /// caller, since the decoder does not know `n`.
    pub fn decode(dec: &mut Decoder<'_>) -> Result<Self, PolicyError> {
        let count = dec.u64()?;
        let mut attrs = Vec::new();
        for _ in 0..count {
            attrs.push(dec.scalar()?);
        }
        if attrs.windows(2).any(|p| p[0] >= p[1]) {
            return Err(PolicyError::InvalidStructure(
                "attribute set not strictly ascending".into(),
            ));
        }
        Self::new(attrs, usize::MAX)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut enc = Encoder::new();
        self.encode_into(&mut enc);
        enc.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_deduplicated() {
        let s = |v| Scalar::from_u64(v);
        let a = AttributeSet::new([s(9), s(2), s(5), s(2)], 16).unwrap();
        assert_eq!(a.as_slice(), &[s(2), s(5), s(9)]);
        let b = AttributeSet::new([s(5), s(9), s(2)], 16).unwrap();
        assert_eq!(a.to_bytes(), b.to_bytes());
        assert!(a.contains(&s(5)));
        assert!(!a.contains(&s(6)));
    }

    #[test]
    fn capacity_bound_inclusive() {
        let attrs: Vec<_> = (1..=14).map(Scalar::from_u64).collect();
        assert!(AttributeSet::new(attrs.clone(), 16).is_ok());
        let mut more = attrs;
        more.push(Scalar::from_u64(15));
        assert_eq!(
            AttributeSet::new(more, 16),
            Err(PolicyError::Capacity { size: 15, max: 14 })
        );
    }

    #[test]
    fn rejects_theta_and_zero() {
        assert_eq!(
            AttributeSet::new([default_attribute()], 8),
            Err(PolicyError::ReservedAttribute)
        );
        assert!(AttributeSet::new([Scalar::zero()], 8).is_err());
    }
}
