//! A `(2, n)` threshold scheme built from linear cellular automata.
//!
//! The dealer publishes `n` pairwise coprime polynomials of degree `2r`.
//! To share a secret `S` of `m = 2rt` symbols it appends a random block `R`
//! and hands player `i` the output of the linear CA `<2m, r, t, f_i>` on
//! `S || R`. Any two players stack the Sylvester matrix of `p_i^t` and
//! `p_j^t`, which maps `S || R` to their two shares, and invert it.
//!
//! The generic orthogonal-array scheme (secret in the last column, shares in
//! the others) is provided alongside for comparison.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::ca::{CaSpec, LocalRule};
use crate::designs::{mols_from_polynomials, oa_from_mols, Encoding, LatinSquare, OrthogonalArray};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::sylvester_matrix;
use crate::poly::Polynomial;

/// Largest number of configurations `q^(2m)` the audit enumerates.
pub const MAX_AUDIT_CONFIGS: u128 = 1 << 20;
/// Largest candidate pool considered by [`PolySource::CoprimeSet`].
pub const MAX_SETUP_CANDIDATES: u128 = 1 << 16;

/// How [`SchemeDescriptor::setup`] picks the rule polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolySource {
    /// Distinct monic irreducible polynomials of degree `2r`.
    Irreducible,
    /// Random degree-`2r` polynomials with nonzero constant term, kept greedily
    /// while coprime to everything chosen so far.
    CoprimeSet,
}

/// Public parameters of the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeDescriptor {
    field: FieldSpec,
    r: usize,
    t: usize,
    polys: Vec<Polynomial>,
    rules: Vec<LocalRule>,
    seed: Option<u64>,
}

/// The dealer's input: secret `S` and randomness `R`, both `m` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretInput {
    pub secret: Vec<FieldElement>,
    pub randomness: Vec<FieldElement>,
}

/// Player `player` (1-based) holds `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Share {
    pub player: usize,
    pub value: Vec<FieldElement>,
}

impl SchemeDescriptor {
    /// Validates a hand-picked set of rule polynomials.
    pub fn new(field: &FieldSpec, r: usize, t: usize, polys: Vec<Polynomial>, seed: Option<u64>) -> Result<Self> {
        if r == 0 || t == 0 {
            return Err(Error::BadParameters("r and t must be at least 1".into()));
        }
        if polys.len() < 2 {
            return Err(Error::BadParameters(format!("need at least 2 players, got {}", polys.len())));
        }
        for p in &polys {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if p.degree() != Some(2 * r) {
                return Err(Error::DegreeMismatch { expected: 2 * r, found: p.degree().unwrap_or(0) });
            }
            if p.coeff(0).is_zero() {
                return Err(Error::NotBipermutive);
            }
        }
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                if !polys[i].is_coprime(&polys[j])? {
                    return Err(Error::NotCoprime(i, j));
                }
            }
        }
        let rules = polys.iter().map(|p| LocalRule::from_polynomial(p, r)).collect::<Result<_>>()?;
        Ok(Self { field: field.clone(), r, t, polys, rules, seed })
    }

    /// Draws `n` rule polynomials of degree `2r` from a generator seeded with `seed`.
    pub fn setup(field: &FieldSpec, r: usize, t: usize, n: usize, source: PolySource, seed: u64) -> Result<Self> {
        if n < 2 || r == 0 || t == 0 {
            return Err(Error::BadParameters(format!("need n >= 2, r >= 1, t >= 1 (n = {n}, r = {r}, t = {t})")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree = 2 * r;
        let polys = match source {
            PolySource::Irreducible => {
                let side = (field.q() as u128).checked_pow(degree as u32).unwrap_or(u128::MAX);
                if side > MAX_SETUP_CANDIDATES {
                    return Err(Error::BadParameters(format!("{side} candidate polynomials")));
                }
                let pool: Vec<Polynomial> = Polynomial::enumerate(field, degree, true, None)
                    .into_iter()
                    .filter(Polynomial::is_irreducible)
                    .collect();
                if pool.len() < n {
                    return Err(Error::NotEnoughPolynomials { needed: n, found: pool.len() });
                }
                sample(&mut rng, pool.len(), n).into_iter().map(|i| pool[i].clone()).collect()
            }
            PolySource::CoprimeSet => {
                let q = field.q() as u128;
                let size = (q - 1).pow(2).saturating_mul(q.checked_pow(degree as u32 - 1).unwrap_or(u128::MAX));
                if size > MAX_SETUP_CANDIDATES {
                    return Err(Error::BadParameters(format!("{size} candidate polynomials")));
                }
                let mut pool: Vec<Polynomial> = Polynomial::enumerate(field, degree, false, None)
                    .into_iter()
                    .filter(|p| !p.coeff(0).is_zero())
                    .collect();
                pool.shuffle(&mut rng);
                let mut chosen: Vec<Polynomial> = Vec::with_capacity(n);
                for p in pool {
                    if chosen.len() == n {
                        break;
                    }
                    if chosen.iter().all(|c| c.is_coprime(&p).unwrap_or(false)) {
                        chosen.push(p);
                    }
                }
                if chosen.len() < n {
                    return Err(Error::NotEnoughPolynomials { needed: n, found: chosen.len() });
                }
                chosen
            }
        };
        Self::new(field, r, t, polys, Some(seed))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub fn steps(&self) -> usize {
        self.t
    }

    /// Secret length `m = 2rt`.
    pub fn m(&self) -> usize {
        2 * self.r * self.t
    }

    pub fn players(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn rules(&self) -> &[LocalRule] {
        &self.rules
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// SHA-256 of the canonical JSON form, hex encoded. Share files carry it.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("descriptor serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    fn ca(&self, player: usize) -> CaSpec {
        CaSpec::new(self.rules[player - 1].clone(), 2 * self.m(), self.t).expect("n = 2m = 4rt satisfies t < n/2r")
    }

    fn check_block(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.m() {
            return Err(Error::LengthMismatch { expected: self.m(), found: v.len() });
        }
        match v.iter().find(|c| !self.field.contains(**c)) {
            Some(bad) => Err(Error::ElementOutOfRange { index: bad.index() as u32, q: self.field.q() }),
            None => Ok(()),
        }
    }

    /// A secret paired with fresh randomness from `rng`.
    pub fn random_input<R: Rng + ?Sized>(&self, secret: Vec<FieldElement>, rng: &mut R) -> Result<SecretInput> {
        self.check_block(&secret)?;
        let q = self.field.q();
        let randomness = (0..self.m()).map(|_| FieldElement::from_raw(rng.gen_range(0..q) as usize)).collect();
        Ok(SecretInput { secret, randomness })
    }

    /// Player `i` receives the CA image of `S || R` under rule `f_i`.
    pub fn share(&self, input: &SecretInput) -> Result<Vec<Share>> {
        self.check_block(&input.secret)?;
        self.check_block(&input.randomness)?;
        let config: Vec<FieldElement> = input.secret.iter().chain(&input.randomness).copied().collect();
        Ok((1..=self.players())
            .map(|player| Share { player, value: self.ca(player).apply_unchecked(&config) })
            .collect())
    }

    /// The `2m x 2m` Sylvester matrix of `p_i^t` and `p_j^t`; it maps `S || R`
    /// to `B_i || B_j`.
    pub fn pair_matrix(&self, i: usize, j: usize) -> Result<crate::linalg::Matrix> {
        let t = self.t as u64;
        sylvester_matrix(&self.polys[i - 1].pow(t), &self.polys[j - 1].pow(t))
    }

    /// Recovers the full configuration `S || R` from two shares.
    pub fn recover_configuration(&self, a: &Share, b: &Share) -> Result<Vec<FieldElement>> {
        for s in [a, b] {
            if s.player == 0 || s.player > self.players() {
                return Err(Error::BadParameters(format!("player {} outside 1..={}", s.player, self.players())));
            }
            self.check_block(&s.value)?;
        }
        if a.player == b.player {
            return Err(Error::SamePlayer(a.player));
        }
        let inverse = self.pair_matrix(a.player, b.player)?.invert()?;
        let stacked: Vec<FieldElement> = a.value.iter().chain(&b.value).copied().collect();
        inverse.mat_vec(&stacked)
    }

    /// Recovers the secret `S` from two shares.
    pub fn recover(&self, a: &Share, b: &Share) -> Result<Vec<FieldElement>> {
        let mut c = self.recover_configuration(a, b)?;
        c.truncate(self.m());
        Ok(c)
    }

    /// The Latin squares of the players' automata, in player order.
    pub fn mols(&self) -> Result<Vec<LatinSquare>> {
        mols_from_polynomials(&self.polys, self.t)
    }

    /// The orthogonal array of the scheme with columns
    /// `[enc(S), enc(R), enc(B_1), ..., enc(B_n)]`, one row per configuration.
    pub fn orthogonal_array(&self) -> Result<OrthogonalArray> {
        oa_from_mols(&self.mols()?)
    }

    /// Exhaustively checks that a single share says nothing about the secret:
    /// for every player, share value `b` and secret `S`, the number of
    /// randomness blocks `R` producing `b` must be the same.
    pub fn security_audit(&self) -> Result<AuditReport> {
        let enc = Encoding::new(&self.field, self.m())?;
        let n = enc.size();
        let configs = (n as u128).pow(2);
        if configs > MAX_AUDIT_CONFIGS {
            return Err(Error::AuditTooLarge(configs));
        }
        let blocks: Vec<Vec<FieldElement>> = enc.blocks().collect();
        let mut players = Vec::with_capacity(self.players());
        let mut violations = Vec::new();
        let mut violation_count = 0usize;
        for player in 1..=self.players() {
            let ca = self.ca(player);
            // counts[b * n + s]
            let mut counts = vec![0usize; n * n];
            for (s, secret) in blocks.iter().enumerate() {
                for rand in &blocks {
                    let config: Vec<FieldElement> = secret.iter().chain(rand).copied().collect();
                    let b = enc.encode_unchecked(&ca.apply_unchecked(&config)) - 1;
                    counts[b * n + s] += 1;
                }
            }
            let (min, max) = (*counts.iter().min().unwrap(), *counts.iter().max().unwrap());
            for (k, &c) in counts.iter().enumerate() {
                if c != 1 {
                    violation_count += 1;
                    if violations.len() < MAX_REPORTED_VIOLATIONS {
                        violations.push(Violation { player, share: k / n + 1, secret: k % n + 1, witnesses: c });
                    }
                }
            }
            players.push(PlayerAudit { player, min_witnesses: min, max_witnesses: max, uniform: min == max });
        }
        Ok(AuditReport { expected_witnesses: 1, uniform: violation_count == 0, players, violation_count, violations })
    }
}

const MAX_REPORTED_VIOLATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerAudit {
    pub player: usize,
    pub min_witnesses: usize,
    pub max_witnesses: usize,
    pub uniform: bool,
}

/// A `(share, secret)` combination reached by the wrong number of randomness blocks.
/// Share and secret are given by their block encodings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub player: usize,
    pub share: usize,
    pub secret: usize,
    pub witnesses: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    /// `q^(2m) / (q^m * q^m)`: witnesses per `(share, secret)` under uniformity.
    pub expected_witnesses: usize,
    pub uniform: bool,
    pub players: Vec<PlayerAudit>,
    pub violation_count: usize,
    /// The first few violations.
    pub violations: Vec<Violation>,
}

/// Result of dealing a secret with an orthogonal array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaDeal {
    /// Index of the chosen row; the dealer keeps this private.
    pub row: usize,
    /// Entries of columns `1..k-1`; player `h` gets `shares[h - 1]`.
    pub shares: Vec<u32>,
}

/// Picks uniformly a row whose last entry is `secret` and hands out its other entries.
pub fn oa_share<R: Rng + ?Sized>(oa: &OrthogonalArray, secret: u32, rng: &mut R) -> Result<OaDeal> {
    if secret == 0 || secret as usize > oa.levels() {
        return Err(Error::SecretOutOfRange(secret as usize));
    }
    let k = oa.columns();
    let candidates: Vec<usize> = (0..oa.rows().len()).filter(|&i| oa.rows()[i][k - 1] == secret).collect();
    let &row = candidates.choose(rng).ok_or(Error::NoRow)?;
    Ok(OaDeal { row, shares: oa.rows()[row][..k - 1].to_vec() })
}

/// Last-column entries of the rows that agree with every `(column, value)`
/// constraint. Columns are 1-based and must be share columns.
pub fn oa_candidates(oa: &OrthogonalArray, known: &[(usize, u32)]) -> Result<Vec<u32>> {
    let k = oa.columns();
    for (i, &(col, _)) in known.iter().enumerate() {
        if col == 0 || col >= k {
            return Err(Error::BadParameters(format!("column {col} outside 1..{k}")));
        }
        if known[..i].iter().any(|&(c, _)| c == col) {
            return Err(Error::BadParameters(format!("column {col} given twice")));
        }
    }
    Ok(oa.rows().iter().filter(|row| known.iter().all(|&(c, v)| row[c - 1] == v)).map(|row| row[k - 1]).collect())
}

/// The secret determined by two shares of a strength-2, index-1 array.
pub fn oa_recover(oa: &OrthogonalArray, positions: [usize; 2], values: [u32; 2]) -> Result<u32> {
    let found = oa_candidates(oa, &[(positions[0], values[0]), (positions[1], values[1])])?;
    match found.as_slice() {
        [] => Err(Error::NoRow),
        [s] => Ok(*s),
        _ => Err(Error::AmbiguousRow),
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorRepr {
    field: FieldSpec,
    r: usize,
    t: usize,
    n: usize,
    polys: Vec<Vec<u32>>,
    seed: Option<u64>,
}

impl Serialize for SchemeDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DescriptorRepr {
            field: self.field.clone(),
            r: self.r,
            t: self.t,
            n: self.players(),
            polys: self.polys.iter().map(Polynomial::to_indices).collect(),
            seed: self.seed,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SchemeDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = DescriptorRepr::deserialize(d)?;
        if repr.polys.len() != repr.n {
            return Err(D::Error::custom(format!("n = {} but {} polynomials", repr.n, repr.polys.len())));
        }
        let polys = repr
            .polys
            .iter()
            .map(|c| Polynomial::from_indices(&repr.field, c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        SchemeDescriptor::new(&repr.field, repr.r, repr.t, polys, repr.seed).map_err(D::Error::custom)
    }
}

/// On-disk share: the value plus the hash of the descriptor it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareFile {
    pub player: usize,
    pub value: Vec<u32>,
    pub descriptor_hash: String,
}

impl ShareFile {
    pub fn new(descriptor: &SchemeDescriptor, share: &Share) -> Self {
        Self {
            player: share.player,
            value: share.value.iter().map(|e| e.index() as u32).collect(),
            descriptor_hash: descriptor.hash(),
        }
    }

    /// Checks the hash and converts back to a [`Share`].
    pub fn to_share(&self, descriptor: &SchemeDescriptor) -> Result<Share> {
        if self.descriptor_hash != descriptor.hash() {
            return Err(Error::DescriptorHashMismatch);
        }
        let value = self.value.iter().map(|&v| descriptor.field().element(v)).collect::<Result<_>>()?;
        Ok(Share { player: self.player, value })
    }
}
