//! Finite fields `F_q`, `q = p^alpha`, used as the cell alphabet.
//!
//! Elements are identified by a canonical index in `0..q`. For prime
//! fields this is the residue; for extensions it is the base-`p` digit
//! string of the coefficient vector (digit `i` is the coefficient of
//! `X^i`). Index 0 is the additive identity and index 1 the
//! multiplicative identity in both cases.
//!
//! All arithmetic is table driven: `q <= 257` keeps the full addition and
//! multiplication tables small.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 257;

/// An element of some [`FieldSpec`], stored as its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub(crate) fn from_raw(index: usize) -> Self {
        FieldElement(index as u16)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    alpha: u32,
    q: u32,
    /// Monic modulus over `F_p`, constant term first; empty for prime fields.
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// A validated finite field. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.alpha == other.0.alpha && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.alpha == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.alpha, self.0.modulus)
        }
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, alpha)` with `q = p^alpha`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut alpha = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        alpha += 1;
    }
    (rest == 1).then_some((p, alpha))
}

impl FieldSpec {
    /// Builds `F_{p^alpha}`.
    ///
    /// For `alpha > 1` the modulus (monic, constant term first) is checked
    /// for degree and irreducibility; when absent, the smallest monic
    /// irreducible of degree `alpha` is used, comparing coefficients from the
    /// constant term upwards.
    pub fn new(p: u32, alpha: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if alpha == 0 {
            return Err(Error::BadField("extension degree must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(alpha).filter(|&q| q <= MAX_ORDER as u64);
        let Some(q) = q else {
            return Err(Error::BadField(format!("{p}^{alpha} exceeds the supported order {MAX_ORDER}")));
        };
        let q = q as u32;

        let base = Self::prime(p)?;
        let modulus = match modulus {
            Some(coeffs) => {
                let poly = Polynomial::from_indices(&base, coeffs)?;
                let deg = poly.degree().unwrap_or(0);
                if deg != alpha as usize {
                    return Err(Error::DegreeMismatch { expected: alpha as usize, found: deg });
                }
                if poly.leading() != FieldElement::ONE {
                    return Err(Error::BadField("modulus must be monic".into()));
                }
                if !poly.is_irreducible() {
                    return Err(Error::ReducibleModulus);
                }
                poly
            }
            None => Polynomial::enumerate(&base, alpha as usize, true, None)
                .into_iter()
                .filter(|f| f.is_irreducible())
                .min_by(|a, b| a.coeffs().cmp(b.coeffs()))
                .expect("irreducible polynomials exist in every degree"),
        };
        if alpha == 1 {
            return Ok(base);
        }
        let modulus: Vec<u32> = modulus.coeffs().iter().map(|c| c.0 as u32).collect();
        Ok(Self(Arc::new(build_extension(p, alpha, q, modulus))))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_ORDER {
            return Err(Error::BadField(format!("{p} exceeds {MAX_ORDER}")));
        }
        let q = p as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u16;
                mul[a * q + b] = ((a * b) % q) as u16;
            }
        }
        Ok(Self(Arc::new(finish_tables(p, 1, p, Vec::new(), add, mul))))
    }

    /// Builds the field of order `q`, auto-selecting the modulus for prime powers.
    pub fn of_order(q: u32) -> Result<Self> {
        let (p, alpha) = prime_power(q).ok_or_else(|| Error::BadField(format!("{q} is not a prime power")))?;
        Self::new(p, alpha, None)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn alpha(&self) -> u32 {
        self.0.alpha
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub(crate) fn order(&self) -> usize {
        self.0.q as usize
    }

    /// Modulus coefficients over `F_p`, constant term first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.0.alpha > 1).then_some(self.0.modulus.as_slice())
    }

    /// Validates an index and wraps it.
    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.0.q {
            Ok(FieldElement(index as u16))
        } else {
            Err(Error::ElementOutOfRange { index, q: self.0.q })
        }
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        (a.0 as u32) < self.0.q
    }

    fn check(&self, a: FieldElement) -> Result<FieldElement> {
        self.element(a.0 as u32)
    }

    /// All elements in ascending index order. This is the total order on
    /// the alphabet used by the block encoding.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.0.q as u16).map(FieldElement)
    }

    // The unchecked operations below assume both operands belong to this
    // field; the `checked_*` variants report foreign elements instead.

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.add[a.index() * self.order() + b.index()])
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.0.mul[a.index() * self.order() + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn checked_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.add(self.check(a)?, self.check(b)?))
    }

    pub fn checked_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let a = self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.0.inv[a.index()]))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn build_extension(p: u32, alpha: u32, q: u32, modulus: Vec<u32>) -> Tables {
    let (pu, a, qu) = (p as usize, alpha as usize, q as usize);
    let digits = |mut x: usize| -> Vec<usize> {
        (0..a)
            .map(|_| {
                let d = x % pu;
                x /= pu;
                d
            })
            .collect()
    };
    let undigits = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &c| acc * pu + c);

    let mut add = vec![0u16; qu * qu];
    let mut mul = vec![0u16; qu * qu];
    for x in 0..qu {
        let dx = digits(x);
        for y in 0..qu {
            let dy = digits(y);
            let sum: Vec<usize> = dx.iter().zip(&dy).map(|(u, v)| (u + v) % pu).collect();
            add[x * qu + y] = undigits(&sum) as u16;

            let mut prod = vec![0usize; 2 * a - 1];
            for (i, u) in dx.iter().enumerate() {
                for (j, v) in dy.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % pu;
                }
            }
            // reduce by the monic modulus from the top down
            for k in (a..prod.len()).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                for (i, &mi) in modulus.iter().enumerate().take(a) {
                    let idx = k - a + i;
                    prod[idx] = (prod[idx] + (pu - c) * mi as usize) % pu;
                }
                prod[k] = 0;
            }
            mul[x * qu + y] = undigits(&prod[..a]) as u16;
        }
    }
    finish_tables(p, alpha, q, modulus, add, mul)
}

fn finish_tables(p: u32, alpha: u32, q: u32, modulus: Vec<u32>, add: Vec<u16>, mul: Vec<u16>) -> Tables {
    let qu = q as usize;
    let neg = (0..qu).map(|a| (0..qu).find(|&b| add[a * qu + b] == 0).unwrap() as u16).collect();
    let mut inv = vec![0u16; qu];
    for a in 1..qu {
        inv[a] = (1..qu).find(|&b| mul[a * qu + b] == 1).unwrap() as u16;
    }
    Tables { p, alpha, q, modulus, add, mul, neg, inv }
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    p: u32,
    alpha: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u32>>,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr { p: self.p(), alpha: self.alpha(), modulus: self.modulus().map(<[u32]>::to_vec) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FieldRepr::deserialize(d)?;
        FieldSpec::new(repr.p, repr.alpha, repr.modulus.as_deref()).map_err(serde::de::Error::custom)
    }
}
