//! Exhaustive search for rule pairs with orthogonal squares, and the coprime
//! pair count for monic polynomials with prescribed constant terms.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::latin::{are_orthogonal, square_from_ca, LatinSquare};
use crate::ca::LocalRule;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::Polynomial;

/// Most rules a census will enumerate.
pub const MAX_CENSUS_RULES: usize = 1 << 12;
/// Upper bound on `pairs * N^2`, the cell comparisons of a census.
pub const MAX_CENSUS_WORK: u128 = 1 << 30;
/// Largest ground set (`q^(n-1)` polynomials per side) for pair counting.
pub const MAX_COUNT_POLYS: u128 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleClass {
    /// Every bipermutive rule (table form); binary alphabet only.
    BipermutiveAll,
    /// Linear rules with `a_0 != 0` and `a_{2r} != 0`.
    BipermutiveLinear,
}

impl fmt::Display for RuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleClass::BipermutiveAll => "bipermutive-all",
            RuleClass::BipermutiveLinear => "bipermutive-linear",
        })
    }
}

impl FromStr for RuleClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipermutive-all" => Ok(RuleClass::BipermutiveAll),
            "bipermutive-linear" => Ok(RuleClass::BipermutiveLinear),
            other => Err(Error::BadParameters(format!("unknown rule class {other:?}"))),
        }
    }
}

/// Pair counts under the conventions one might use when reporting a census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairConventions {
    /// Unordered pairs `{f, g}` with `f != g`.
    pub unordered_distinct: usize,
    /// Ordered pairs `(f, g)` with `f != g`.
    pub ordered_distinct: usize,
    /// Unordered pairs allowing `f = g` (a square is never orthogonal to itself for `N > 1`).
    pub unordered_with_self: usize,
    /// Binary only: classes of unordered pairs where `{f, g}` and the pair of
    /// complemented rules `{not f, not g}` count once.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint_complement_classes: Option<usize>,
}

/// Cross-check of a linear census against polynomial coprimality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialRoute {
    /// Rule polynomials, aligned with [`Census::rules`].
    pub polynomials: Vec<Vec<u32>>,
    /// Index pairs whose polynomials are coprime.
    pub coprime_pairs: Vec<(usize, usize)>,
    /// Whether the coprime pairs coincide with the orthogonal ones.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub field: FieldSpec,
    pub radius: usize,
    pub m: usize,
    pub class: RuleClass,
    pub order: usize,
    pub rule_count: usize,
    /// Rule identifiers in enumeration order (see [`rule_id`]).
    pub rules: Vec<String>,
    /// Unordered orthogonal pairs of distinct rules.
    pub pair_count: usize,
    pub conventions: PairConventions,
    /// Index pairs `(i, j)`, `i < j`, in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial_route: Option<PolynomialRoute>,
}

impl Census {
    /// Orthogonal pairs as rule identifiers.
    pub fn named_pairs(&self) -> Vec<(&str, &str)> {
        self.pairs.iter().map(|&(i, j)| (self.rules[i].as_str(), self.rules[j].as_str())).collect()
    }
}

/// `wolfram:<n>:r<r>` for binary rules, `linear:<q>:<c0,...>` for other linear rules.
pub fn rule_id(rule: &LocalRule) -> String {
    if let Some(n) = rule.wolfram_number() {
        return format!("wolfram:{n}:r{}", rule.radius());
    }
    match rule.linear_coeffs() {
        Some(c) => {
            let c: Vec<String> = c.iter().map(FieldElement::to_string).collect();
            format!("linear:{}:{}", rule.field().q(), c.join(","))
        }
        None => format!("table:{}:r{}", rule.field().q(), rule.radius()),
    }
}

fn elements_odometer(field: &FieldSpec, len: usize) -> impl Iterator<Item = Vec<FieldElement>> {
    let q = field.q() as usize;
    (0..q.pow(len as u32)).map(move |mut w| {
        let mut v: Vec<FieldElement> = (0..len)
            .map(|_| {
                let d = w % q;
                w /= q;
                FieldElement::from_raw(d)
            })
            .collect();
        // first coordinate slowest
        v.reverse();
        v
    })
}

/// Every rule of the class at the given radius, in deterministic order:
/// linear rules by coefficient sequence, binary tables by Wolfram number.
pub fn enumerate_rules(field: &FieldSpec, radius: usize, class: RuleClass) -> Result<Vec<LocalRule>> {
    if radius == 0 {
        return Err(Error::BadParameters("radius must be at least 1".into()));
    }
    let q = field.q() as u128;
    match class {
        RuleClass::BipermutiveLinear => {
            let count = (q - 1).pow(2).saturating_mul(q.checked_pow(2 * radius as u32 - 1).unwrap_or(u128::MAX));
            if count > MAX_CENSUS_RULES as u128 {
                return Err(Error::SearchTooLarge(format!("{count} linear rules")));
            }
            elements_odometer(field, 2 * radius + 1)
                .filter(|c| !c[0].is_zero() && !c[2 * radius].is_zero())
                .map(|c| LocalRule::from_coeffs(field, &c))
                .collect()
        }
        RuleClass::BipermutiveAll => {
            if field.q() != 2 {
                return Err(Error::SearchTooLarge("non-linear enumeration is only supported over F_2".into()));
            }
            // over F_2 the bipermutive rules are x_0 + u(x_1..x_{2r-1}) + x_{2r}
            let inner = 2 * radius - 1;
            let count = 1u128.checked_shl(1 << inner).unwrap_or(u128::MAX);
            if inner >= 7 || count > MAX_CENSUS_RULES as u128 {
                return Err(Error::SearchTooLarge(format!("2^(2^{inner}) bipermutive rules")));
            }
            let window = 2 * radius + 1;
            let mut numbers: Vec<u128> = (0..count)
                .map(|u| {
                    (0..1usize << window).fold(0u128, |acc, w| {
                        let mid = (w >> 1) & ((1 << inner) - 1);
                        let bit = (w & 1) ^ ((u >> mid) & 1) as usize ^ (w >> (window - 1));
                        acc | ((bit as u128) << w)
                    })
                })
                .collect();
            numbers.sort_unstable();
            numbers.into_iter().map(|n| LocalRule::from_wolfram(n, radius)).collect()
        }
    }
}

/// Builds every rule's square once, then tests all unordered pairs.
pub fn search_orthogonal_pairs(field: &FieldSpec, radius: usize, m: usize, class: RuleClass) -> Result<Census> {
    let rules = enumerate_rules(field, radius, class)?;
    let order = (field.q() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    let n_rules = rules.len() as u128;
    let work = (n_rules * n_rules.saturating_sub(1) / 2).saturating_mul(order.saturating_mul(order));
    if order > 1 << 12 || work > MAX_CENSUS_WORK {
        return Err(Error::SearchTooLarge(format!("{n_rules} rules at order {order}")));
    }

    let squares: Vec<LatinSquare> = rules.par_iter().map(|r| square_from_ca(r, m)).collect::<Result<_>>()?;
    let pairs = orthogonal_pairs(&squares)?;

    let joint_complement_classes = (field.q() == 2).then(|| complement_classes(&rules, &pairs));
    let polynomial_route = match class {
        RuleClass::BipermutiveLinear => Some(polynomial_route(&rules, &pairs)?),
        RuleClass::BipermutiveAll => None,
    };
    Ok(Census {
        field: field.clone(),
        radius,
        m,
        class,
        order: order as usize,
        rule_count: rules.len(),
        rules: rules.iter().map(rule_id).collect(),
        pair_count: pairs.len(),
        conventions: PairConventions {
            unordered_distinct: pairs.len(),
            ordered_distinct: 2 * pairs.len(),
            unordered_with_self: pairs.len() + squares.iter().filter(|s| s.order() == 1).count(),
            joint_complement_classes,
        },
        pairs,
        polynomial_route,
    })
}

fn orthogonal_pairs(squares: &[LatinSquare]) -> Result<Vec<(usize, usize)>> {
    let per_row: Vec<Vec<(usize, usize)>> = (0..squares.len())
        .into_par_iter()
        .map(|i| {
            let mut found = Vec::new();
            for j in i + 1..squares.len() {
                if are_orthogonal(&squares[i], &squares[j])? {
                    found.push((i, j));
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(per_row.into_iter().flatten().collect())
}

fn complement_classes(rules: &[LocalRule], pairs: &[(usize, usize)]) -> usize {
    let numbers: Vec<Option<u128>> = rules.iter().map(LocalRule::wolfram_number).collect();
    let mask = |r: &LocalRule| {
        let bits = 1u32 << r.window();
        if bits >= 128 {
            u128::MAX
        } else {
            (1u128 << bits) - 1
        }
    };
    let classes: BTreeSet<(u128, u128)> = pairs
        .iter()
        .filter_map(|&(i, j)| {
            let (a, b) = (numbers[i]?, numbers[j]?);
            let (ca, cb) = (a ^ mask(&rules[i]), b ^ mask(&rules[j]));
            let key = (a.min(b), a.max(b));
            let comp = (ca.min(cb), ca.max(cb));
            Some(key.min(comp))
        })
        .collect();
    classes.len()
}

fn polynomial_route(rules: &[LocalRule], pairs: &[(usize, usize)]) -> Result<PolynomialRoute> {
    let polys: Vec<Polynomial> = rules.iter().map(LocalRule::polynomial).collect::<Result<_>>()?;
    let mut coprime_pairs = Vec::new();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if polys[i].is_coprime(&polys[j])? {
                coprime_pairs.push((i, j));
            }
        }
    }
    Ok(PolynomialRoute {
        polynomials: polys.iter().map(Polynomial::to_indices).collect(),
        agrees: coprime_pairs == pairs,
        coprime_pairs,
    })
}

/// Number of ordered pairs `(f, g)` of monic degree-`n` polynomials with
/// constant terms `a` and `b` that are coprime. Pairs with `f = g` belong to
/// the ground set (and are never coprime for `n >= 1`).
pub fn count_coprime_pairs(field: &FieldSpec, n: usize, a: FieldElement, b: FieldElement) -> Result<u64> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroConstant);
    }
    if !field.contains(a) || !field.contains(b) {
        return Err(Error::ElementOutOfRange { index: a.index().max(b.index()) as u32, q: field.q() });
    }
    if n == 0 {
        return Err(Error::BadParameters("degree must be at least 1".into()));
    }
    let side = (field.q() as u128).checked_pow(n as u32 - 1).unwrap_or(u128::MAX);
    if side > MAX_COUNT_POLYS {
        return Err(Error::SearchTooLarge(format!("{side} polynomials per side")));
    }
    let fs = Polynomial::enumerate(field, n, true, Some(a));
    let gs = Polynomial::enumerate(field, n, true, Some(b));
    fs.par_iter().map(|f| gs.iter().try_fold(0u64, |acc, g| Ok(acc + u64::from(f.is_coprime(g)?)))).sum()
}
