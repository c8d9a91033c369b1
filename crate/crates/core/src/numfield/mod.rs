//! Number fields `K = Q[x]/(f)` with a verified integral basis, automorphism group,
//! ideal arithmetic, norms and prime decomposition data.

mod element;
mod field;
mod ideal;
mod spec;
mod splitting;

pub mod bundled;


pub use element::FieldElement;
pub use field::{verify_field_spec, CheckResult, CheckStatus, NumberField, VerificationReport};
pub use ideal::IntegralIdeal;
pub use spec::{
    ClassGeneratorEntry, ClassGeneratorSpec, FieldFile, NumberFieldSpec, PrimeFactorizationEntry,
    PrimeFactorizationSpec, PrimeIdealEntry, QuadraticSubfieldEntry, QuadraticSubfieldSpec, RationalValue,
};
pub use splitting::{RamifiedPrimes, SplittingData, SplittingSource};

/// `N_{K/Q}(x)`.
pub fn element_norm(k: &NumberField, x: &FieldElement) -> num_rational::BigRational {
    k.norm(x)
}

pub fn apply_automorphism(k: &NumberField, sigma: usize, x: &FieldElement) -> crate::Result<FieldElement> {
    k.apply_automorphism(sigma, x)
}
