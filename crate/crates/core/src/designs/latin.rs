use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Encoding;
use crate::ca::{CaSpec, LocalRule};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Largest square order `q^m` built from a CA.
pub const MAX_SQUARE_ORDER: u128 = 1 << 16;

/// Where a CA-generated square came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub rule: LocalRule,
    pub m: usize,
}

/// An `N x N` Latin square over `1..=N`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    entries: Vec<u32>,
    provenance: Option<Provenance>,
}

/// True iff `rows` is square and every row and column is a permutation of `1..=N`.
pub fn is_latin(rows: &[Vec<u32>]) -> bool {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return false;
    }
    (0..n).all(|i| is_permutation(n, rows[i].iter().copied()) && is_permutation(n, rows.iter().map(|r| r[i])))
}

fn is_permutation(n: usize, mut it: impl Iterator<Item = u32>) -> bool {
    let mut seen = vec![false; n + 1];
    it.all(|x| (1..=n as u32).contains(&x) && !std::mem::replace(&mut seen[x as usize], true))
}

impl LatinSquare {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        if !is_latin(&rows) {
            return Err(Error::NotLatin(format!("{} rows fail the permutation test", rows.len())));
        }
        Ok(Self { order: rows.len(), entries: rows.into_iter().flatten().collect(), provenance: None })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry at 0-based `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.order).map(<[u32]>::to_vec).collect()
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Grid text: one row per line, entries separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.entries.chunks(self.order) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|e| Error::ShapeMismatch(format!("{t:?}: {e}"))))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    /// The superposed pairs `(self(i,j), other(i,j))` in row-major order.
    pub fn superpose(&self, other: &LatinSquare) -> Result<Vec<(u32, u32)>> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(self.entries.iter().copied().zip(other.entries.iter().copied()).collect())
    }
}

/// The square of the CA `<2m, r, m/2r, f>`: entry `(i, j)` is the encoding of
/// the CA output on `decode(i) || decode(j)`.
pub fn square_from_ca(rule: &LocalRule, m: usize) -> Result<LatinSquare> {
    if !rule.is_bipermutive() {
        return Err(Error::NotBipermutive);
    }
    let two_r = 2 * rule.radius();
    if m == 0 || !m.is_multiple_of(two_r) {
        return Err(Error::BadBlockLength { m, two_r });
    }
    let order = (rule.field().q() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if order > MAX_SQUARE_ORDER {
        return Err(Error::OrderTooLarge(order));
    }
    let ca = CaSpec::new(rule.clone(), 2 * m, m / two_r)?;
    let enc = Encoding::new(rule.field(), m)?;
    let blocks: Vec<_> = enc.blocks().collect();
    let n = blocks.len();

    let row = |i: usize| {
        let mut config = blocks[i].clone();
        config.resize(2 * m, Default::default());
        let mut out = Vec::with_capacity(n);
        for block in &blocks {
            config[m..].copy_from_slice(block);
            out.push(enc.encode_unchecked(&ca.apply_unchecked(&config)) as u32);
        }
        out
    };
    // thread start-up dominates for small squares
    let entries: Vec<u32> =
        if n >= 64 { (0..n).into_par_iter().flat_map_iter(row).collect() } else { (0..n).flat_map(row).collect() };

    let square = LatinSquare { order: n, entries, provenance: Some(Provenance { rule: rule.clone(), m }) };
    // holds for every bipermutive rule; re-checked so a bad rule table cannot slip through
    if !is_latin(&square.rows()) {
        return Err(Error::NotLatin("CA square failed validation".into()));
    }
    Ok(square)
}

/// True iff superposing the squares yields every ordered pair exactly once.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    let n = a.order;
    let mut seen = vec![0u64; (n * n).div_ceil(64)];
    for (&x, &y) in a.entries.iter().zip(&b.entries) {
        let k = (x as usize - 1) * n + (y as usize - 1);
        let (word, bit) = (k / 64, 1u64 << (k % 64));
        if seen[word] & bit != 0 {
            return Ok(false);
        }
        seen[word] |= bit;
    }
    Ok(true)
}

/// True iff every unordered pair of the (at least two) squares is orthogonal.
pub fn mols_check(squares: &[LatinSquare]) -> Result<bool> {
    if squares.len() < 2 {
        return Err(Error::ShapeMismatch(format!("need at least two squares, got {}", squares.len())));
    }
    let order = squares[0].order;
    if let Some(s) = squares.iter().find(|s| s.order != order) {
        return Err(Error::OrderMismatch(order, s.order));
    }
    for (i, a) in squares.iter().enumerate() {
        for b in &squares[i + 1..] {
            if !are_orthogonal(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks that `p` can be the polynomial of a bipermutive linear rule: even
/// degree `2r >= 2` with nonzero constant term. Returns `r`.
fn bipermutive_radius(p: &Polynomial) -> Result<usize> {
    match p.degree() {
        Some(d) if d >= 2 && d % 2 == 0 => {
            if p.coeff(0).is_zero() {
                Err(Error::NotBipermutive)
            } else {
                Ok(d / 2)
            }
        }
        Some(d) => Err(Error::BadParameters(format!("degree {d} is not a positive even number"))),
        None => Err(Error::NotBipermutive),
    }
}

/// Orthogonality of the squares of two linear bipermutive rules, decided from
/// their polynomials alone: orthogonal exactly when the polynomials are coprime.
/// The answer is the same for every `m = 2rt`.
pub fn squares_orthogonal_by_polynomials(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    if f.field() != g.field() {
        return Err(Error::FieldMismatch);
    }
    let (df, dg) = (f.degree().unwrap_or(0), g.degree().unwrap_or(0));
    if df != dg {
        return Err(Error::DegreeMismatch { expected: df, found: dg });
    }
    bipermutive_radius(f)?;
    bipermutive_radius(g)?;
    f.is_coprime(g)
}

/// Squares of the linear CA `<2m, r, t, f_i>` for pairwise coprime rule
/// polynomials of common degree `2r`, with `m = 2rt`.
pub fn mols_from_polynomials(polys: &[Polynomial], t: usize) -> Result<Vec<LatinSquare>> {
    let Some(first) = polys.first() else {
        return Err(Error::ShapeMismatch("no polynomials".into()));
    };
    if t == 0 {
        return Err(Error::BadParameters("t must be at least 1".into()));
    }
    let r = bipermutive_radius(first)?;
    for p in polys {
        if p.field() != first.field() {
            return Err(Error::FieldMismatch);
        }
        if p.degree() != first.degree() {
            return Err(Error::DegreeMismatch { expected: 2 * r, found: p.degree().unwrap_or(0) });
        }
        bipermutive_radius(p)?;
    }
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if !polys[i].is_coprime(&polys[j])? {
                return Err(Error::NotCoprime(i, j));
            }
        }
    }
    let order = (first.field().q() as u128).checked_pow((2 * r * t) as u32).unwrap_or(u128::MAX);
    if order > MAX_SQUARE_ORDER {
        return Err(Error::OrderTooLarge(order));
    }
    polys.iter().map(|p| square_from_ca(&LocalRule::from_polynomial(p, r)?, 2 * r * t)).collect()
}

#[derive(Serialize, Deserialize)]
struct SquareRepr {
    order: usize,
    entries: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

impl Serialize for LatinSquare {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SquareRepr { order: self.order, entries: self.rows(), provenance: self.provenance.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatinSquare {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SquareRepr::deserialize(d)?;
        if repr.entries.len() != repr.order {
            return Err(D::Error::custom(format!("order {} but {} rows", repr.order, repr.entries.len())));
        }
        let mut sq = LatinSquare::new(repr.entries).map_err(D::Error::custom)?;
        sq.provenance = repr.provenance;
        Ok(sq)
    }
}
