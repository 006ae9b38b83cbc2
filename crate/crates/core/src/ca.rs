//! One-dimensional cellular automata without boundary: every step maps a
//! configuration of length `L` to one of length `L - 2r`.
//!
//! A window `(x_0, ..., x_{2r})` is encoded as the mixed-radix integer
//! `sum x_i q^i` (so `x_0` is the least significant digit). Table rules are
//! indexed by that integer, and Wolfram numbers over `F_2` put the output
//! for window `w` at bit `w`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::Polynomial;

/// Largest table a rule may be expanded into.
pub const MAX_TABLE_ENTRIES: u128 = 1 << 20;

/// A cell configuration.
pub type Configuration = Vec<FieldElement>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleBody {
    /// `f(x) = a_0 x_0 + ... + a_{2r} x_{2r}`
    Linear(Vec<FieldElement>),
    /// Output for every window, indexed by the window encoding.
    Table(Vec<FieldElement>),
}

/// A local rule `f: A^{2r+1} -> A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRule {
    field: FieldSpec,
    radius: usize,
    body: RuleBody,
}

/// Which outer variables the rule is a permutation of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Permutivity {
    pub leftmost: bool,
    pub rightmost: bool,
}

impl Permutivity {
    pub fn is_bipermutive(self) -> bool {
        self.leftmost && self.rightmost
    }
}

fn table_size(q: u32, window: usize) -> Option<u128> {
    (q as u128).checked_pow(u32::try_from(window).ok()?)
}

impl LocalRule {
    /// Linear rule from its coefficients `a_0..a_{2r}`.
    pub fn from_coeffs(field: &FieldSpec, coeffs: &[FieldElement]) -> Result<Self> {
        if coeffs.len() < 3 || coeffs.len().is_multiple_of(2) {
            return Err(Error::EvenWindow(coeffs.len()));
        }
        if let Some(bad) = coeffs.iter().find(|c| !field.contains(**c)) {
            return Err(Error::ElementOutOfRange { index: bad.index() as u32, q: field.q() });
        }
        Ok(Self { field: field.clone(), radius: (coeffs.len() - 1) / 2, body: RuleBody::Linear(coeffs.to_vec()) })
    }

    /// Table rule; `entries` must have `q^(2r+1)` elements.
    pub fn from_table(field: &FieldSpec, radius: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if radius == 0 {
            return Err(Error::EvenWindow(1));
        }
        let expected = table_size(field.q(), 2 * radius + 1)
            .filter(|&n| n <= MAX_TABLE_ENTRIES)
            .ok_or(Error::TableTooLarge(u128::MAX))? as usize;
        if entries.len() != expected {
            return Err(Error::LengthMismatch { expected, found: entries.len() });
        }
        if let Some(bad) = entries.iter().find(|c| !field.contains(**c)) {
            return Err(Error::ElementOutOfRange { index: bad.index() as u32, q: field.q() });
        }
        Ok(Self { field: field.clone(), radius, body: RuleBody::Table(entries) })
    }

    /// Binary table rule whose output on window `w` is bit `w` of `number`.
    pub fn from_wolfram(number: u128, radius: usize) -> Result<Self> {
        let bits = 1u32
            .checked_shl(2 * radius as u32 + 1)
            .filter(|&b| radius >= 1 && b <= 128)
            .ok_or(Error::NumberOutOfRange { number, radius })?;
        if bits < 128 && number >> bits != 0 {
            return Err(Error::NumberOutOfRange { number, radius });
        }
        let f2 = FieldSpec::prime(2)?;
        let entries =
            (0..bits).map(|w| if (number >> w) & 1 == 1 { FieldElement::ONE } else { FieldElement::ZERO }).collect();
        Self::from_table(&f2, radius, entries)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Window length `2r + 1`.
    pub fn window(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn body(&self) -> &RuleBody {
        &self.body
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.body, RuleBody::Linear(_))
    }

    pub fn linear_coeffs(&self) -> Option<&[FieldElement]> {
        match &self.body {
            RuleBody::Linear(c) => Some(c),
            RuleBody::Table(_) => None,
        }
    }

    /// Mixed-radix index of a window, `x_0` least significant.
    pub fn window_index(&self, window: &[FieldElement]) -> usize {
        let q = self.field.order();
        window.iter().rev().fold(0, |acc, x| acc * q + x.index())
    }

    /// Applies the rule to one window of length `2r + 1`.
    #[inline]
    pub fn eval(&self, window: &[FieldElement]) -> FieldElement {
        debug_assert_eq!(window.len(), self.window());
        match &self.body {
            RuleBody::Linear(a) => {
                let f = &self.field;
                a.iter().zip(window).fold(FieldElement::ZERO, |acc, (&c, &x)| f.add(acc, f.mul(c, x)))
            }
            RuleBody::Table(t) => t[self.window_index(window)],
        }
    }

    /// The polynomial `a_0 + a_1 X + ... + a_{2r} X^{2r}` of a linear rule.
    pub fn polynomial(&self) -> Result<Polynomial> {
        let coeffs = self.linear_coeffs().ok_or(Error::NonlinearRule)?;
        Polynomial::new(&self.field, coeffs.to_vec())
    }

    /// Linear rule with the coefficients of `p`, padded with zeros to a window
    /// of `2 radius + 1`.
    pub fn from_polynomial(p: &Polynomial, radius: usize) -> Result<Self> {
        let window = 2 * radius + 1;
        if p.degree().is_some_and(|d| d >= window) {
            return Err(Error::DegreeMismatch { expected: window - 1, found: p.degree().unwrap() });
        }
        let coeffs: Vec<FieldElement> = (0..window).map(|i| p.coeff(i)).collect();
        Self::from_coeffs(p.field(), &coeffs)
    }

    /// Full output table, for linear and table rules alike.
    pub fn table(&self) -> Result<Vec<FieldElement>> {
        if let RuleBody::Table(t) = &self.body {
            return Ok(t.clone());
        }
        let size = table_size(self.field.q(), self.window())
            .filter(|&n| n <= MAX_TABLE_ENTRIES)
            .ok_or(Error::TableTooLarge(table_size(self.field.q(), self.window()).unwrap_or(u128::MAX)))?;
        let q = self.field.order();
        let mut window = vec![FieldElement::ZERO; self.window()];
        Ok((0..size as usize)
            .map(|mut w| {
                for x in window.iter_mut() {
                    *x = FieldElement::from_raw(w % q);
                    w /= q;
                }
                self.eval(&window)
            })
            .collect())
    }

    /// The same function as a table rule.
    pub fn to_table_rule(&self) -> Result<Self> {
        Self::from_table(&self.field, self.radius, self.table()?)
    }

    /// Whether two rules compute the same function (same field and radius).
    pub fn same_function(&self, other: &Self) -> Result<bool> {
        Ok(self.field == other.field && self.radius == other.radius && self.table()? == other.table()?)
    }

    /// Wolfram number of a binary rule, when it fits in 128 bits.
    pub fn wolfram_number(&self) -> Option<u128> {
        if self.field.q() != 2 || self.window() > 7 {
            return None;
        }
        let t = self.table().ok()?;
        Some(t.iter().enumerate().fold(0u128, |acc, (w, x)| acc | ((x.index() as u128) << w)))
    }

    /// Exhaustive permutivity check for tables; coefficient test for linear rules.
    pub fn permutivity(&self) -> Permutivity {
        match &self.body {
            RuleBody::Linear(a) => Permutivity { leftmost: !a[0].is_zero(), rightmost: !a[a.len() - 1].is_zero() },
            RuleBody::Table(t) => {
                let q = self.field.order();
                let inner = q.pow(2 * self.radius as u32);
                let is_perm = |idx: &dyn Fn(usize) -> usize| {
                    let mut seen = vec![false; q];
                    (0..q).all(|x| !std::mem::replace(&mut seen[t[idx(x)].index()], true))
                };
                // x_{2r} is the most significant digit, x_0 the least
                let rightmost = (0..inner).all(|rest| is_perm(&|x| rest + x * inner));
                let leftmost = (0..inner).all(|rest| is_perm(&|x| x + q * rest));
                Permutivity { leftmost, rightmost }
            }
        }
    }

    pub fn is_bipermutive(&self) -> bool {
        self.permutivity().is_bipermutive()
    }

    /// One application of the global rule: `len(x) - 2r` output cells.
    pub fn global_step(&self, x: &[FieldElement]) -> Result<Configuration> {
        if x.len() < self.window() {
            return Err(Error::ConfigTooShort { len: x.len(), radius: self.radius });
        }
        if let Some(bad) = x.iter().find(|c| !self.field.contains(**c)) {
            return Err(Error::ElementOutOfRange { index: bad.index() as u32, q: self.field.q() });
        }
        Ok(self.step_unchecked(x))
    }

    pub(crate) fn step_unchecked(&self, x: &[FieldElement]) -> Configuration {
        x.windows(self.window()).map(|w| self.eval(w)).collect()
    }

    /// The iterate `f^t` of a linear rule: radius `rt`, coefficients of `p_f^t`.
    pub fn iterated(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadCaSpec("iteration count must be at least 1".into()));
        }
        let p = self.polynomial()?.pow(t as u64);
        Self::from_polynomial(&p, self.radius * t)
    }

    /// The iterate `f^t` as a table, by running `t` steps on every window of
    /// length `2rt + 1`. Works for any rule.
    pub fn iterated_table(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadCaSpec("iteration count must be at least 1".into()));
        }
        let window = 2 * self.radius * t + 1;
        let size = table_size(self.field.q(), window).unwrap_or(u128::MAX);
        if size > MAX_TABLE_ENTRIES {
            return Err(Error::TableTooLarge(size));
        }
        let q = self.field.order();
        let mut x = vec![FieldElement::ZERO; window];
        let entries = (0..size as usize)
            .map(|mut w| {
                for c in x.iter_mut() {
                    *c = FieldElement::from_raw(w % q);
                    w /= q;
                }
                let mut cur = x.clone();
                for _ in 0..t {
                    cur = self.step_unchecked(&cur);
                }
                cur[0]
            })
            .collect();
        Self::from_table(&self.field, self.radius * t, entries)
    }
}

/// The automaton `<n, r, t, f>`: `t` global steps on configurations of length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaSpec {
    rule: LocalRule,
    n: usize,
    t: usize,
}

impl CaSpec {
    /// Requires `1 <= t < floor(n / 2r)`.
    pub fn new(rule: LocalRule, n: usize, t: usize) -> Result<Self> {
        let two_r = 2 * rule.radius();
        if t == 0 || t >= n / two_r {
            return Err(Error::BadCaSpec(format!(
                "need 1 <= t < floor(n/2r), got n = {n}, r = {}, t = {t}",
                rule.radius()
            )));
        }
        Ok(Self { rule, n, t })
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn output_len(&self) -> usize {
        self.n - 2 * self.rule.radius() * self.t
    }

    pub fn apply(&self, x: &[FieldElement]) -> Result<Configuration> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, found: x.len() });
        }
        let mut cur = self.rule.global_step(x)?;
        for _ in 1..self.t {
            cur = self.rule.step_unchecked(&cur);
        }
        Ok(cur)
    }

    /// [`apply`](Self::apply) without length or range checks.
    pub(crate) fn apply_unchecked(&self, x: &[FieldElement]) -> Configuration {
        let mut cur = self.rule.step_unchecked(x);
        for _ in 1..self.t {
            cur = self.rule.step_unchecked(&cur);
        }
        cur
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RuleKind {
    Linear { coeffs: Vec<u32> },
    Table { entries: Vec<u32> },
}

#[derive(Serialize, Deserialize)]
struct RuleRepr {
    field: FieldSpec,
    radius: usize,
    #[serde(flatten)]
    kind: RuleKind,
}

impl Serialize for LocalRule {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let idx = |v: &[FieldElement]| v.iter().map(|e| e.index() as u32).collect();
        let kind = match &self.body {
            RuleBody::Linear(c) => RuleKind::Linear { coeffs: idx(c) },
            RuleBody::Table(t) => RuleKind::Table { entries: idx(t) },
        };
        RuleRepr { field: self.field.clone(), radius: self.radius, kind }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalRule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RuleRepr::deserialize(d)?;
        let f = &repr.field;
        let els = |v: &[u32]| v.iter().map(|&i| f.element(i)).collect::<Result<Vec<_>>>();
        let rule = match repr.kind {
            RuleKind::Linear { coeffs } => {
                let rule = els(&coeffs).and_then(|c| LocalRule::from_coeffs(f, &c));
                if rule.as_ref().is_ok_and(|r| r.radius != repr.radius) {
                    return Err(D::Error::custom("radius does not match coefficient count"));
                }
                rule
            }
            RuleKind::Table { entries } => els(&entries).and_then(|e| LocalRule::from_table(f, repr.radius, e)),
        };
        rule.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::transition_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> FieldSpec {
        FieldSpec::prime(2).unwrap()
    }

    fn els(f: &FieldSpec, v: &[u32]) -> Vec<FieldElement> {
        v.iter().map(|&i| f.element(i).unwrap()).collect()
    }

    fn linear(f: &FieldSpec, c: &[u32]) -> LocalRule {
        LocalRule::from_coeffs(f, &els(f, c)).unwrap()
    }

    /// Every configuration of length `n` over `F_q`, first cell fastest.
    fn all_configs(f: &FieldSpec, n: usize) -> Vec<Vec<FieldElement>> {
        let q = f.q() as usize;
        (0..q.pow(n as u32))
            .map(|mut w| {
                (0..n)
                    .map(|_| {
                        let d = w % q;
                        w /= q;
                        FieldElement::from_raw(d)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn constructors() {
        let f = f2();
        let r150 = linear(&f, &[1, 1, 1]);
        assert_eq!(r150.radius(), 1);
        assert_eq!(LocalRule::from_coeffs(&f, &els(&f, &[1, 1])), Err(Error::EvenWindow(2)));
        assert_eq!(LocalRule::from_coeffs(&f, &els(&f, &[1])), Err(Error::EvenWindow(1)));
        let f3 = FieldSpec::prime(3).unwrap();
        let ternary = linear(&f3, &[1, 0, 2]);
        assert_eq!(ternary.radius(), 1);
        let stray = FieldSpec::prime(5).unwrap().element(4).unwrap();
        assert!(matches!(
            LocalRule::from_coeffs(&f3, &[FieldElement::ONE, FieldElement::ZERO, stray]),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert!(LocalRule::from_wolfram(255, 1).is_ok());
        assert!(matches!(LocalRule::from_wolfram(256, 1), Err(Error::NumberOutOfRange { .. })));
        assert!(LocalRule::from_wolfram(u32::MAX as u128, 2).is_ok());
        assert!(LocalRule::from_wolfram(1 << 32, 2).is_err());
    }

    #[test]
    fn wolfram_matches_linear_tables() {
        let f = f2();
        assert!(LocalRule::from_wolfram(150, 1).unwrap().same_function(&linear(&f, &[1, 1, 1])).unwrap());
        assert!(LocalRule::from_wolfram(90, 1).unwrap().same_function(&linear(&f, &[1, 0, 1])).unwrap());
        assert!(!LocalRule::from_wolfram(90, 1).unwrap().same_function(&linear(&f, &[1, 1, 1])).unwrap());
        // tabulate x0 ^ x1 ^ x2 independently
        let t150 = LocalRule::from_wolfram(150, 1).unwrap().table().unwrap();
        let t90 = LocalRule::from_wolfram(90, 1).unwrap().table().unwrap();
        for (w, (a, b)) in t150.iter().zip(&t90).enumerate() {
            assert_eq!(a.index(), (w & 1) ^ ((w >> 1) & 1) ^ ((w >> 2) & 1));
            assert_eq!(b.index(), (w & 1) ^ (w >> 2));
        }
        assert!(LocalRule::from_wolfram(0, 1).unwrap().table().unwrap().iter().all(|x| x.is_zero()));
        assert_eq!(linear(&f, &[1, 1, 1]).wolfram_number(), Some(150));
        assert_eq!(linear(&f, &[1, 0, 1]).wolfram_number(), Some(90));
    }

    #[test]
    fn rule_polynomials() {
        let f = f2();
        assert_eq!(linear(&f, &[1, 1, 1]).polynomial().unwrap(), Polynomial::from_indices(&f, &[1, 1, 1]).unwrap());
        assert_eq!(linear(&f, &[1, 0, 1]).polynomial().unwrap(), Polynomial::from_indices(&f, &[1, 0, 1]).unwrap());
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(linear(&f3, &[2, 0, 0]).polynomial().unwrap(), Polynomial::from_indices(&f3, &[2]).unwrap());
        assert_eq!(LocalRule::from_wolfram(150, 1).unwrap().polynomial(), Err(Error::NonlinearRule));
    }

    #[test]
    fn bipermutivity() {
        let f = f2();
        let both = Permutivity { leftmost: true, rightmost: true };
        let none = Permutivity { leftmost: false, rightmost: false };
        assert_eq!(linear(&f, &[1, 1, 1]).permutivity(), both);
        assert_eq!(linear(&f, &[1, 0, 1]).permutivity(), both);
        assert_eq!(LocalRule::from_wolfram(150, 1).unwrap().permutivity(), both);
        assert_eq!(LocalRule::from_wolfram(90, 1).unwrap().permutivity(), both);
        assert_eq!(LocalRule::from_wolfram(0, 1).unwrap().permutivity(), none);
        // x0 ^ x1 only: leftmost permutive
        let left = linear(&f, &[1, 1, 0]);
        assert_eq!(left.permutivity(), Permutivity { leftmost: true, rightmost: false });
        assert_eq!(left.to_table_rule().unwrap().permutivity(), left.permutivity());
        // over F_2 at radius 1 exactly 4 of 256 tables are bipermutive
        let n = (0..256u128).filter(|&w| LocalRule::from_wolfram(w, 1).unwrap().is_bipermutive()).count();
        assert_eq!(n, 4);
    }

    #[test]
    fn linear_permutivity_agrees_with_tables() {
        let f3 = FieldSpec::prime(3).unwrap();
        for c in all_configs(&f3, 3) {
            let r = LocalRule::from_coeffs(&f3, &c).unwrap();
            assert_eq!(r.permutivity(), r.to_table_rule().unwrap().permutivity());
        }
    }

    #[test]
    fn global_steps() {
        let f = f2();
        let r150 = linear(&f, &[1, 1, 1]);
        let r90 = linear(&f, &[1, 0, 1]);
        assert_eq!(r150.global_step(&els(&f, &[1, 0, 0, 1])).unwrap(), els(&f, &[1, 1]));
        assert_eq!(r90.global_step(&els(&f, &[0, 0, 1, 0])).unwrap(), els(&f, &[1, 0]));
        assert_eq!(r150.global_step(&els(&f, &[0, 0, 0, 0])).unwrap(), els(&f, &[0, 0]));
        assert_eq!(r150.global_step(&els(&f, &[0, 1])), Err(Error::ConfigTooShort { len: 2, radius: 1 }));
    }

    #[test]
    fn ca_application() {
        let f = f2();
        let r150 = linear(&f, &[1, 1, 1]);
        let ca = CaSpec::new(r150.clone(), 4, 1).unwrap();
        assert_eq!(ca.apply(&els(&f, &[0, 0, 1, 0])).unwrap(), els(&f, &[1, 1]));
        let ca8 = CaSpec::new(r150.clone(), 8, 2).unwrap();
        assert_eq!(ca8.output_len(), 4);
        assert_eq!(ca8.apply(&[FieldElement::ZERO; 8]).unwrap(), vec![FieldElement::ZERO; 4]);
        for x in all_configs(&f, 8) {
            let twice = r150.global_step(&r150.global_step(&x).unwrap()).unwrap();
            assert_eq!(ca8.apply(&x).unwrap(), twice);
        }
        assert_eq!(ca8.apply(&els(&f, &[0, 1])), Err(Error::LengthMismatch { expected: 8, found: 2 }));
        // t must stay strictly below floor(n / 2r)
        assert!(CaSpec::new(r150.clone(), 4, 2).is_err());
        assert!(CaSpec::new(r150.clone(), 5, 2).is_err());
        assert!(CaSpec::new(r150.clone(), 6, 2).is_ok());
        assert!(CaSpec::new(r150, 6, 0).is_err());
    }

    #[test]
    fn iterated_rules() {
        let f = f2();
        let r150 = linear(&f, &[1, 1, 1]);
        let r90 = linear(&f, &[1, 0, 1]);
        assert_eq!(r150.iterated(2).unwrap(), linear(&f, &[1, 0, 1, 0, 1]));
        assert_eq!(r90.iterated(2).unwrap(), linear(&f, &[1, 0, 0, 0, 1]));
        assert_eq!(r150.iterated(1).unwrap(), r150);
        assert_eq!(LocalRule::from_wolfram(150, 1).unwrap().iterated(2), Err(Error::NonlinearRule));

        let t1 = r150.iterated_table(1).unwrap();
        assert_eq!(t1.table().unwrap(), r150.table().unwrap());
        let t2 = r150.iterated_table(2).unwrap();
        assert_eq!(t2.table().unwrap().len(), 32);
        assert!(t2.same_function(&linear(&f, &[1, 0, 1, 0, 1])).unwrap());
        let zero = LocalRule::from_wolfram(0, 1).unwrap().iterated_table(3).unwrap();
        assert!(zero.table().unwrap().iter().all(|x| x.is_zero()));
        assert!(matches!(r150.iterated_table(10), Err(Error::TableTooLarge(_))));
    }

    #[test]
    fn iterate_equivalence_all_binary_radius_one_rules() {
        let f = f2();
        for number in 0..256u128 {
            let rule = LocalRule::from_wolfram(number, 1).unwrap();
            for t in 1..=3 {
                let it = rule.iterated_table(t).unwrap();
                let n = 4 * t;
                let ca = CaSpec::new(rule.clone(), n, t).unwrap();
                for x in all_configs(&f, n) {
                    assert_eq!(ca.apply(&x).unwrap(), it.global_step(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn transition_matrix_products_match_ca() {
        let f = f2();
        for c in all_configs(&f, 3) {
            let rule = LocalRule::from_coeffs(&f, &c).unwrap();
            for n in 3..=8 {
                for t in 1..=3 {
                    if n < 2 * t + 1 {
                        continue;
                    }
                    let mut prod = transition_matrix(&rule, n, 0).unwrap();
                    for step in 1..t {
                        prod = transition_matrix(&rule, n, step).unwrap().mul(&prod).unwrap();
                    }
                    for x in all_configs(&f, n) {
                        let mut direct = x.clone();
                        for _ in 0..t {
                            direct = rule.global_step(&direct).unwrap();
                        }
                        assert_eq!(prod.mat_vec(&x).unwrap(), direct);
                    }
                }
            }
        }
    }

    #[test]
    fn restrictions_of_bipermutive_steps_are_bijective() {
        let f = f2();
        for r in 1..=2usize {
            // over F_2 the bipermutive rules are x_0 + u(x_1..x_{2r-1}) + x_{2r}
            let inner = 2 * r - 1;
            let bip: Vec<LocalRule> = (0..1u128 << (1 << inner))
                .map(|u| {
                    let number = (0..1usize << (2 * r + 1)).fold(0u128, |acc, w| {
                        let mid = (w >> 1) & ((1 << inner) - 1);
                        let bit = (w & 1) ^ ((u >> mid) & 1) as usize ^ (w >> (2 * r));
                        acc | ((bit as u128) << w)
                    });
                    LocalRule::from_wolfram(number, r).unwrap()
                })
                .collect();
            assert!(bip.iter().all(LocalRule::is_bipermutive));
            for rule in bip {
                for len in 2 * r + 1..=8 {
                    let free = len - 2 * r;
                    for fixed in all_configs(&f, 2 * r) {
                        let mut seen_left = vec![false; 1 << free];
                        let mut seen_right = vec![false; 1 << free];
                        for rest in all_configs(&f, free) {
                            let code = |v: &[FieldElement]| v.iter().rev().fold(0, |a, x| 2 * a + x.index());
                            let left: Vec<_> = fixed.iter().chain(&rest).copied().collect();
                            let right: Vec<_> = rest.iter().chain(&fixed).copied().collect();
                            let ol = code(&rule.global_step(&left).unwrap());
                            let or = code(&rule.global_step(&right).unwrap());
                            assert!(!std::mem::replace(&mut seen_left[ol], true));
                            assert!(!std::mem::replace(&mut seen_right[or], true));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ternary_iterates_agree_with_polynomial_powers() {
        let f3 = FieldSpec::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let c: Vec<FieldElement> = (0..3).map(|_| f3.element(rng.gen_range(0..3)).unwrap()).collect();
            let rule = LocalRule::from_coeffs(&f3, &c).unwrap();
            for t in 1..=3 {
                let lin = rule.iterated(t).unwrap();
                assert_eq!(lin.polynomial().unwrap(), rule.polynomial().unwrap().pow(t as u64));
                let n = 4 * t;
                let ca = CaSpec::new(rule.clone(), n, t).unwrap();
                for _ in 0..200 {
                    let x: Vec<FieldElement> = (0..n).map(|_| f3.element(rng.gen_range(0..3)).unwrap()).collect();
                    assert_eq!(ca.apply(&x).unwrap(), lin.global_step(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn serde_forms() {
        let f = f2();
        let r = linear(&f, &[1, 1, 1]);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"field":{"p":2,"alpha":1},"radius":1,"kind":"linear","coeffs":[1,1,1]}"#);
        assert_eq!(serde_json::from_str::<LocalRule>(&s).unwrap(), r);
        let t = LocalRule::from_wolfram(90, 1).unwrap();
        let back: LocalRule = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<LocalRule>(
            r#"{"field":{"p":2,"alpha":1},"radius":2,"kind":"linear","coeffs":[1,1,1]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<LocalRule>(
            r#"{"field":{"p":2,"alpha":1},"radius":1,"kind":"table","entries":[0,1]}"#
        )
        .is_err());
    }
}
