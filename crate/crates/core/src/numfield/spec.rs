//! Field specification files (TOML or JSON).

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{IntPolynomial, RatPolynomial};

/// A rational written as an integer or a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Str(String),
}

impl RationalValue {
    pub fn parse(&self, context: &str) -> Result<BigRational> {
        let err = |m: String| Error::Parse {
            context: context.to_string(),
            message: m,
        };
        match self {
            RationalValue::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
            RationalValue::Str(s) => {
                let s = s.trim();
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| err(format!("bad numerator in {s:?}")))?;
                let d: BigInt = d.parse().map_err(|_| err(format!("bad denominator in {s:?}")))?;
                if d.is_zero() {
                    return Err(err(format!("zero denominator in {s:?}")));
                }
                Ok(BigRational::new(n, d))
            }
        }
    }

    pub fn parse_integer(&self, context: &str) -> Result<BigInt> {
        let r = self.parse(context)?;
        if !r.is_integer() {
            return Err(Error::Parse {
                context: context.to_string(),
                message: format!("expected an integer, got {r}"),
            });
        }
        Ok(r.to_integer())
    }
}

impl From<&BigRational> for RationalValue {
    fn from(r: &BigRational) -> Self {
        match (r.is_integer(), i64::try_from(r.to_integer())) {
            (true, Ok(v)) => RationalValue::Int(v),
            _ => RationalValue::Str(r.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassGeneratorEntry {
    pub q: u64,
    pub root: u64,
    pub alpha_coordinates: Vec<RationalValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSubfieldEntry {
    pub m: i64,
    pub witness_coordinates: Vec<RationalValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeIdealEntry {
    /// Ideal generators in integral-basis coordinates.
    pub generators: Vec<Vec<RationalValue>>,
    pub e: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeFactorizationEntry {
    pub p: u64,
    pub factors: Vec<PrimeIdealEntry>,
}

/// On-disk layout of a field specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    #[serde(default)]
    pub name: Option<String>,
    /// Coefficients of the monic defining polynomial, lowest degree first.
    pub defining_poly: Vec<RationalValue>,
    /// Rows are basis elements written in the power basis `1, theta, ..., theta^(n-1)`.
    #[serde(default)]
    pub integral_basis: Option<Vec<Vec<RationalValue>>>,
    /// Images `sigma(theta)` as polynomials in `theta`, lowest degree first.
    pub automorphisms: Vec<Vec<RationalValue>>,
    pub class_number: u64,
    #[serde(default)]
    pub class_generators: Vec<ClassGeneratorEntry>,
    #[serde(default)]
    pub quadratic_subfields: Vec<QuadraticSubfieldEntry>,
    #[serde(default)]
    pub prime_factorizations: Vec<PrimeFactorizationEntry>,
    #[serde(default)]
    pub maximality_assumed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassGeneratorSpec {
    pub q: u64,
    pub root: u64,
    pub alpha: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSubfieldSpec {
    pub m: BigInt,
    pub witness: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeFactorizationSpec {
    pub p: u64,
    /// `(generators, e)` per prime ideal.
    pub factors: Vec<(Vec<Vec<BigRational>>, u32)>,
}

/// A number field as supplied by the user, before verification.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberFieldSpec {
    pub name: String,
    pub defining_poly: IntPolynomial,
    /// Basis elements (rows) in power-basis coordinates.
    pub integral_basis: Vec<Vec<BigRational>>,
    pub automorphisms: Vec<RatPolynomial>,
    pub class_number: u64,
    pub class_generators: Vec<ClassGeneratorSpec>,
    pub quadratic_subfields: Vec<QuadraticSubfieldSpec>,
    pub prime_factorizations: Vec<PrimeFactorizationSpec>,
    pub maximality_assumed: bool,
}

fn parse_vec(v: &[RationalValue], ctx: &str) -> Result<Vec<BigRational>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| x.parse(&format!("{ctx}[{i}]")))
        .collect()
}

impl NumberFieldSpec {
    pub fn from_file_struct(file: &FieldFile) -> Result<Self> {
        let coeffs: Vec<BigInt> = file
            .defining_poly
            .iter()
            .enumerate()
            .map(|(i, c)| c.parse_integer(&format!("defining_poly[{i}]")))
            .collect::<Result<_>>()?;
        let defining_poly = IntPolynomial::new(coeffs);
        let n = defining_poly.degree().ok_or_else(|| Error::Parse {
            context: "defining_poly".into(),
            message: "zero polynomial".into(),
        })?;
        let integral_basis = match &file.integral_basis {
            Some(rows) => rows
                .iter()
                .enumerate()
                .map(|(i, r)| parse_vec(r, &format!("integral_basis[{i}]")))
                .collect::<Result<Vec<_>>>()?,
            None => (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                BigRational::one()
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        };
        let automorphisms = file
            .automorphisms
            .iter()
            .enumerate()
            .map(|(i, a)| Ok(RatPolynomial::new(parse_vec(a, &format!("automorphisms[{i}]"))?)))
            .collect::<Result<Vec<_>>>()?;
        let class_generators = file
            .class_generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                Ok(ClassGeneratorSpec {
                    q: g.q,
                    root: g.root,
                    alpha: parse_vec(
                        &g.alpha_coordinates,
                        &format!("class_generators[{i}].alpha_coordinates"),
                    )?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let quadratic_subfields = file
            .quadratic_subfields
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(QuadraticSubfieldSpec {
                    m: BigInt::from(s.m),
                    witness: parse_vec(
                        &s.witness_coordinates,
                        &format!("quadratic_subfields[{i}].witness_coordinates"),
                    )?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let prime_factorizations = file
            .prime_factorizations
            .iter()
            .enumerate()
            .map(|(i, pf)| {
                let factors = pf
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(j, fac)| {
                        let gens = fac
                            .generators
                            .iter()
                            .enumerate()
                            .map(|(k, g)| {
                                parse_vec(g, &format!("prime_factorizations[{i}].factors[{j}].generators[{k}]"))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((gens, fac.e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PrimeFactorizationSpec { p: pf.p, factors })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NumberFieldSpec {
            name: file.name.clone().unwrap_or_else(|| format!("Q[x]/({defining_poly})")),
            defining_poly,
            integral_basis,
            automorphisms,
            class_number: file.class_number,
            class_generators,
            quadratic_subfields,
            prime_factorizations,
            maximality_assumed: file.maximality_assumed,
        })
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let file: FieldFile = toml::from_str(s).map_err(|e| Error::Parse {
            context: "field file (TOML)".into(),
            message: e.to_string(),
        })?;
        Self::from_file_struct(&file)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: FieldFile = serde_json::from_str(s).map_err(|e| Error::Parse {
            context: format!("field file (JSON) line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::from_file_struct(&file)
    }

    /// Reads a `.json` or `.toml` file; the format follows the extension.
    pub fn from_path(path: &Path) -> Result<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path).map_err(|e| Error::Parse {
            context: path.display().to_string(),
            message: e.to_string(),
        })?;
        let text = std::str::from_utf8(&bytes).map_err(|e| Error::Parse {
            context: path.display().to_string(),
            message: e.to_string(),
        })?;
        let spec = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(text)?
        } else {
            Self::from_toml_str(text)?
        };
        Ok((spec, bytes))
    }

    pub fn degree(&self) -> usize {
        self.defining_poly.degree().unwrap_or(0)
    }
}
