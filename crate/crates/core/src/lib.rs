//! Combinatorial designs from one-dimensional cellular automata over finite fields.
//!
//! A bipermutive CA of radius `r` applied `t` times to a block of length
//! `2m = 4rt` gives a Latin square of order `q^m`. For linear rules, two
//! squares are orthogonal exactly when the rule polynomials are coprime, which
//! is decided through the determinant of their Sylvester matrix. The same
//! matrix inverts a pair of shares in the threshold scheme of [`sss`].

pub mod ca;
pub mod cli;
pub mod designs;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod poly;
pub mod sss;

pub use ca::{CaSpec, Configuration, LocalRule};
pub use designs::{
    are_orthogonal, is_latin, mols_check, oa_from_mols, oa_validate, search_orthogonal_pairs, square_from_ca, Census,
    LatinSquare, OrthogonalArray, RuleClass,
};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec};
pub use linalg::Matrix;
pub use poly::Polynomial;
pub use sss::{SchemeDescriptor, SecretInput, Share};
