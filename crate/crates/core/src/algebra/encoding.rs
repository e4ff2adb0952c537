//! Canonical byte encoding for composite structures.
//!
//! Every field is written as a 4-byte big-endian length followed by the
//! field bytes. Scalars are 32-byte big-endian, first-group points 48-byte
//! compressed, dual elements 144 bytes (first-group then second-group
//! compressed).

use super::{AlgebraError, DualGroupElement, GroupElement, Scalar};

#[derive(Default, Debug, Clone)]
pub struct Encoder {
    buf: Vec<u8>,
}

impl Encoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bytes(&mut self, field: &[u8]) -> &mut Self {
        let len = u32::try_from(field.len()).expect("field longer than 4 GiB");
        self.buf.extend_from_slice(&len.to_be_bytes());
        self.buf.extend_from_slice(field);
        self
    }

    pub fn scalar(&mut self, s: &Scalar) -> &mut Self {
        self.bytes(&s.to_bytes())
    }

    pub fn point(&mut self, p: &GroupElement) -> &mut Self {
        self.bytes(&p.to_bytes())
    }

    pub fn dual(&mut self, d: &DualGroupElement) -> &mut Self {
        self.bytes(&d.to_bytes())
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.bytes(&v.to_be_bytes())
    }

    pub fn finish(&mut self) -> Vec<u8> {
        std::mem::take(&mut self.buf)
    }
}

#[derive(Debug)]
pub struct Decoder<'a> {
    buf: &'a [u8],
}

impl<'a> Decoder<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Decoder { buf }
    }

    pub fn bytes(&mut self) -> Result<&'a [u8], AlgebraError> {
        if self.buf.len() < 4 {
            return Err(AlgebraError::InvalidEncoding("truncated length prefix"));
        }
        let len = u32::from_be_bytes(self.buf[..4].try_into().expect("4 bytes")) as usize;
        let rest = &self.buf[4..];
        if rest.len() < len {
            return Err(AlgebraError::InvalidEncoding("truncated field"));
        }
        let (field, tail) = rest.split_at(len);
        self.buf = tail;
        Ok(field)
    }

    pub fn scalar(&mut self) -> Result<Scalar, AlgebraError> {
        Scalar::from_bytes(self.bytes()?)
    }

    pub fn point(&mut self) -> Result<GroupElement, AlgebraError> {
        GroupElement::from_bytes(self.bytes()?)
    }

    pub fn dual(&mut self) -> Result<DualGroupElement, AlgebraError> {
        DualGroupElement::from_bytes(self.bytes()?)
    }

    pub fn u64(&mut self) -> Result<u64, AlgebraError> {
        let b: [u8; 8] = self
            .bytes()?
            .try_into()
            .map_err(|_| AlgebraError::InvalidEncoding("u64 width"))?;
        Ok(u64::from_be_bytes(b))
    }

    /// Fails if unread bytes remain.
    pub fn finish(self) -> Result<(), AlgebraError> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(AlgebraError::InvalidEncoding("trailing bytes"))
        }
    }
}
