//! Combinatorial designs from bipermutive cellular automata: Latin squares,
//! orthogonality tests, orthogonal arrays, and exhaustive searches.

mod encoding;
mod latin;
mod oa;
mod search;

pub use encoding::Encoding;
pub use latin::{
    are_orthogonal, is_latin, mols_check, mols_from_polynomials, square_from_ca, squares_orthogonal_by_polynomials,
    LatinSquare, Provenance, MAX_SQUARE_ORDER,
};
pub use oa::{oa_from_mols, oa_validate, OrthogonalArray};
pub use search::{
    count_coprime_pairs, enumerate_rules, rule_id, search_orthogonal_pairs, Census, PairConventions, PolynomialRoute,
    RuleClass,
};
