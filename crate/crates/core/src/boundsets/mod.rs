//! The effective exceptional prime sets: Weil numbers, exponent enumerations, norm values
//! and the sets `N'_1(K)`, `N_1(K)` with the bounds built on them.

mod bound;
mod classdata;
mod enumerate;
mod norms;
mod weil;


pub use bound::{
    assemble_gamma0_report, assemble_irreducibility_bound, Gamma0Conclusion, Gamma0Report, IrreducibilityBound,
};
pub use classdata::{ClassData, ClassGenerator};
pub use enumerate::{
    build_exceptional_sets, BudgetReport, Enumeration, EnumerationOptions, EnumerationStats, ExceptionalSets,
    NormWitness, PrimeProvenance, PrimeSource, UnfactoredValue, WitnessFactor, DEFAULT_TUPLE_BUDGET,
};
pub use norms::{
    alpha_power, beta_in_field, cyclotomic, norm_value, norm_value_pieces, ExponentVector, NormPieces, Variant,
};
pub use weil::{beta_power_trace, frobenius_roots, FrobeniusRoot};
