//! Effective finiteness certificates for QM-abelian surfaces with torsion unramified
//! outside `p`.
//!
//! Given the discriminant `d` of an indefinite rational quaternion algebra `B` and a
//! Galois number field `K`, the crate checks the hypotheses of the finiteness theorem,
//! finds the auxiliary prime `q`, enumerates the exceptional prime sets, and assembles a
//! machine-readable certificate.

pub mod boundsets;
pub mod certify;
pub mod error;
pub mod jsonint;
pub mod numfield;
pub mod polyarith;
pub mod quadforms;
pub mod quaternion;
pub mod shimura;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type IntPolynomial = polyarith::Polynomial<BigInt>;
pub type RatPolynomial = polyarith::Polynomial<BigRational>;
pub type IntMatrix = polyarith::Matrix<BigInt>;
pub type RatMatrix = polyarith::Matrix<BigRational>;
