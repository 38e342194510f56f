//! Exact lattice, plumbing and Seiberg–Witten bookkeeping for rational
//! blow-down constructions in `CP² # n(−CP²)`.
//!
//! The algorithms are generic over [`scalar::Int`]; the aliases below fix
//! the scalar to [`BigInt`].

pub mod embedding;
pub mod error;
pub mod fibration;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod plumbing;
pub mod scalar;
pub mod swsearch;

pub use num_bigint::BigInt;

pub use error::{Error, Result};

pub type Class = lattice::HomologyClass<BigInt>;
pub type Gram = lattice::GramMatrix<BigInt>;
pub type Chain = plumbing::LinearChain<BigInt>;
pub type Graph = plumbing::FramedGraph<BigInt>;
pub type Rational = scalar::Rat<BigInt>;
