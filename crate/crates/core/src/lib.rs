//! Exact computations in the left-symmetric Witt algebra of derivations of a
//! polynomial ring, the free left-symmetric algebra, and the identities that
//! relate them.

pub mod error;
pub mod freelsa;
pub mod lambda;
pub mod matrix;
pub mod opid;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod skew;
pub mod witt;

pub use error::{Error, Result};
pub use freelsa::{LsElement, Word, WordCombination};
pub use opid::AssocPoly;
pub use poly::{Monomial, Polynomial, VarSet};
pub use rational::Rational;
pub use witt::{Class, Derivation};
