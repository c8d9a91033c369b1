//! Field specifications shipped with the crate.

use super::{NumberField, NumberFieldSpec};
use crate::error::{Error, Result};

/// `(key, TOML source)` for every shipped field.
pub const FIELDS: &[(&str, &str)] = &[
    ("rationals", include_str!("../../fields/rationals.toml")),
    ("q_sqrt_m5", include_str!("../../fields/q_sqrt_m5.toml")),
    ("q_sqrt3_sqrt_m5", include_str!("../../fields/q_sqrt3_sqrt_m5.toml")),
    ("q_zeta5", include_str!("../../fields/q_zeta5.toml")),
    ("q_zeta17", include_str!("../../fields/q_zeta17.toml")),
    ("q_i", include_str!("../../fields/q_i.toml")),
    ("q_sqrt2", include_str!("../../fields/q_sqrt2.toml")),
];

pub fn source(key: &str) -> Result<&'static str> {
    FIELDS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::invalid(format!("no bundled field named {key:?}")))
}

pub fn spec(key: &str) -> Result<NumberFieldSpec> {
    NumberFieldSpec::from_toml_str(source(key)?)
}

pub fn field(key: &str) -> Result<NumberField> {
    NumberField::new(spec(key)?)
}
