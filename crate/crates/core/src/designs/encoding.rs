use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Monotone bijection between blocks `A^m` and `1..=q^m`.
///
/// `encode(x) = 1 + sum index(x_i) q^i`, so the leftmost coordinate is the
/// least significant digit: over `F_2` with `m = 2`, `00 -> 1`, `10 -> 2`,
/// `01 -> 3`, `11 -> 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoding {
    field: FieldSpec,
    m: usize,
    size: usize,
}

impl Encoding {
    pub fn new(field: &FieldSpec, m: usize) -> Result<Self> {
        let size = (field.q() as u64)
            .checked_pow(m as u32)
            .filter(|&n| n <= u32::MAX as u64)
            .ok_or_else(|| Error::OrderTooLarge((field.q() as u128).saturating_pow(m as u32)))?;
        Ok(Self { field: field.clone(), m, size: size as usize })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `N = q^m`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, x: &[FieldElement]) -> Result<usize> {
        if x.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, found: x.len() });
        }
        if let Some(bad) = x.iter().find(|c| !self.field.contains(**c)) {
            return Err(Error::ElementOutOfRange { index: bad.index() as u32, q: self.field.q() });
        }
        Ok(self.encode_unchecked(x))
    }

    #[inline]
    pub(crate) fn encode_unchecked(&self, x: &[FieldElement]) -> usize {
        let q = self.field.q() as usize;
        1 + x.iter().rev().fold(0, |acc, c| acc * q + c.index())
    }

    pub fn decode(&self, i: usize) -> Result<Vec<FieldElement>> {
        if i == 0 || i > self.size {
            return Err(Error::IndexOutOfRange { index: i, max: self.size });
        }
        let q = self.field.q() as usize;
        let mut rest = i - 1;
        Ok((0..self.m)
            .map(|_| {
                let d = rest % q;
                rest /= q;
                FieldElement::from_raw(d)
            })
            .collect())
    }

    /// All blocks in encoding order: `blocks()[i - 1] == decode(i)`.
    pub fn blocks(&self) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
        (1..=self.size).map(|i| self.decode(i).expect("in range"))
    }
}
