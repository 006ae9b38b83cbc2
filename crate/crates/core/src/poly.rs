//! Univariate polynomials over a [`FieldSpec`], constant term first.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{sylvester_matrix_general, Matrix};

/// A normalized polynomial: the last stored coefficient is nonzero, and the
/// zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.index()) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, _) => write!(f, "{c}X")?,
                (_, 1) => write!(f, "X^{i}")?,
                _ => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl Polynomial {
    /// Wraps a coefficient vector (constant term first), validating and trimming it.
    pub fn new(field: &FieldSpec, coeffs: Vec<FieldElement>) -> Result<Self> {
        for &c in &coeffs {
            if !field.contains(c) {
                return Err(Error::ElementOutOfRange { index: c.index() as u32, q: field.q() });
            }
        }
        Ok(Self::from_trusted(field.clone(), coeffs))
    }

    pub(crate) fn from_trusted(field: FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_indices(field: &FieldSpec, coeffs: &[u32]) -> Result<Self> {
        let coeffs = coeffs.iter().map(|&c| field.element(c)).collect::<Result<_>>()?;
        Ok(Self::from_trusted(field.clone(), coeffs))
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::constant(field, FieldElement::ONE)
    }

    pub fn constant(field: &FieldSpec, c: FieldElement) -> Self {
        Self::from_trusted(field.clone(), vec![c])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `X^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn to_indices(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.index() as u32).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_trusted(f.clone(), coeffs))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg(c)).collect();
        Self::from_trusted(self.field.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect();
        Self::from_trusted(self.field.clone(), coeffs)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Self::from_trusted(f.clone(), out))
    }

    /// `self^t` by square-and-multiply; `self^0 = 1`.
    pub fn pow(&self, mut t: u64) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            t >>= 1;
            if t > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Scales so the leading coefficient is 1. The zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.field.inv(self.leading()) {
            Ok(inv) => self.scale(inv),
            Err(_) => self.clone(),
        }
    }

    /// Euclidean division: `self = quotient * divisor + remainder` with
    /// `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_field(divisor)?;
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return Ok((Self::zero(f), self.clone()));
        };
        let mut quot = vec![FieldElement::ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((Self::from_trusted(f.clone(), quot), Self::from_trusted(f.clone(), rem)))
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn is_coprime(&self, other: &Self) -> Result<bool> {
        Ok(self.gcd(other)?.degree() == Some(0))
    }

    /// The Sylvester matrix of `self` and `other` (see [`sylvester_matrix_general`]).
    pub fn sylvester(&self, other: &Self) -> Result<Matrix> {
        sylvester_matrix_general(self, other)
    }

    /// Resultant as the determinant of the Sylvester matrix. Nonzero exactly
    /// when the two polynomials are coprime.
    pub fn resultant(&self, other: &Self) -> Result<FieldElement> {
        self.sylvester(other)?.determinant()
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    /// Constants (and zero) are not irreducible.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree().filter(|&d| d >= 1) else {
            return false;
        };
        (1..=d / 2).all(|k| {
            Self::enumerate(&self.field, k, true, None)
                .iter()
                .all(|g| !self.div_rem(g).expect("nonzero divisor").1.is_zero())
        })
    }

    /// All polynomials of exact degree `degree`, optionally monic and with a
    /// fixed constant term, in lexicographic order of their coefficient
    /// sequences (constant term compared first).
    ///
    /// A fixed zero constant term is honoured; for degree 0 the constant term
    /// is also the leading coefficient.
    pub fn enumerate(
        field: &FieldSpec,
        degree: usize,
        monic: bool,
        constant_term: Option<FieldElement>,
    ) -> Vec<Polynomial> {
        let all: Vec<FieldElement> = field.elements().collect();
        let nonzero: Vec<FieldElement> = field.elements().skip(1).collect();
        let leading: Vec<FieldElement> = if monic { vec![FieldElement::ONE] } else { nonzero };
        let constants: Vec<FieldElement> = match constant_term {
            Some(c) => vec![c],
            None => all.clone(),
        };

        let mut slots: Vec<&[FieldElement]> = Vec::with_capacity(degree + 1);
        if degree == 0 {
            let only: Vec<FieldElement> = leading.iter().filter(|c| constants.contains(c)).copied().collect();
            return only.into_iter().map(|c| Self::constant(field, c)).collect();
        }
        slots.push(&constants);
        for _ in 1..degree {
            slots.push(&all);
        }
        slots.push(&leading);

        let total: usize = slots.iter().map(|s| s.len()).product();
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; slots.len()];
        for _ in 0..total {
            let coeffs = digits.iter().zip(&slots).map(|(&d, s)| s[d]).collect();
            out.push(Self::from_trusted(field.clone(), coeffs));
            // odometer with the highest-degree slot varying fastest
            for pos in (0..slots.len()).rev() {
                digits[pos] += 1;
                if digits[pos] < slots[pos].len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
        out
    }
}
