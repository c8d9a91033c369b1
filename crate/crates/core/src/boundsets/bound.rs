//! The prime bounds behind irreducibility of the mod `p` representations and the
//! `Gamma_0(p)`-type points.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::enumerate::ExceptionalSets;
use super::norms::Variant;
use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::quaternion::{nonsplit_over_imag_quad, splits_over_k, QuaternionAlgebra};

fn check_auxiliary_prime(k: &NumberField, b: &QuaternionAlgebra, q: u64) -> Result<()> {
    if !k.splits_completely(q)? {
        return Err(Error::invalid(format!("{q} does not split completely in K")));
    }
    if !nonsplit_over_imag_quad(b, q) {
        return Err(Error::invalid(format!("B splits over Q(sqrt(-{q}))")));
    }
    Ok(())
}

fn check_sets(sets: &ExceptionalSets, variant: Variant) -> Result<()> {
    if sets.variant != variant {
        return Err(Error::invalid(format!("expected the {variant:?} exceptional sets")));
    }
    if !sets.is_exhaustive() {
        return Err(Error::invalid("exceptional sets come from a restricted enumeration"));
    }
    Ok(())
}

fn merge(sets: &[&ExceptionalSets]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut primes: Vec<BigInt> = sets.iter().flat_map(|s| s.n1.iter().cloned()).collect();
    primes.sort();
    primes.dedup();
    let mut cof: Vec<BigInt> = sets.iter().flat_map(|s| s.cofactors()).collect();
    cof.sort();
    cof.dedup();
    (primes, cof)
}

fn largest_prime(d: u64) -> u64 {
    crate::quaternion::discriminant_primes(d)
        .ok()
        .and_then(|v| v.last().copied())
        .unwrap_or(1)
}

/// `P(p) = [p > 4q, p does not divide d, p not in N'_1]`, with a constant `C` such that
/// every prime `p > C` satisfies `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityBound {
    pub q: u64,
    pub d: u64,
    pub four_q: u64,
    pub largest_prime_of_d: u64,
    #[serde(with = "crate::jsonint::vec")]
    pub excluded: Vec<BigInt>,
    /// Unsplit composite parts of norm values; primes dividing them are excluded too.
    #[serde(with = "crate::jsonint::vec")]
    pub unfactored_cofactors: Vec<BigInt>,
    #[serde(with = "crate::jsonint")]
    pub constant: BigInt,
    pub predicate: String,
}

fn excluded_by(p: &BigInt, d: u64, excluded: &[BigInt], cofactors: &[BigInt]) -> bool {
    (BigInt::from(d) % p).is_zero() || excluded.binary_search(p).is_ok() || cofactors.iter().any(|c| (c % p).is_zero())
}

fn constant_of(floor: u64, excluded: &[BigInt], cofactors: &[BigInt]) -> BigInt {
    excluded
        .iter()
        .chain(cofactors)
        .cloned()
        .chain(std::iter::once(BigInt::from(floor)))
        .max()
        .expect("nonempty")
}

impl IrreducibilityBound {
    /// `P(p)` for a prime `p`.
    pub fn holds(&self, p: &BigInt) -> bool {
        p > &BigInt::from(self.four_q) && !excluded_by(p, self.d, &self.excluded, &self.unfactored_cofactors)
    }
}

pub fn assemble_irreducibility_bound(
    k: &NumberField,
    b: &QuaternionAlgebra,
    primed: &ExceptionalSets,
    q: u64,
) -> Result<IrreducibilityBound> {
    check_auxiliary_prime(k, b, q)?;
    check_sets(primed, Variant::Primed)?;
    let (excluded, cofactors) = merge(&[primed]);
    let four_q = 4 * q;
    let lp = largest_prime(b.d);
    let mut predicate = format!("p > {four_q} and p does not divide {} and p is not in N'_1(K)", b.d);
    if !cofactors.is_empty() {
        predicate.push_str(" and p divides no unfactored cofactor");
    }
    Ok(IrreducibilityBound {
        q,
        d: b.d,
        four_q,
        largest_prime_of_d: lp,
        constant: constant_of(four_q.max(lp), &excluded, &cofactors),
        excluded,
        unfactored_cofactors: cofactors,
        predicate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma0Conclusion {
    /// `B ⊗ K = M_2(K)`: no `K`-points.
    Empty,
    /// `B ⊗ K` is a division algebra: only elliptic points.
    EllipticPointsOnly,
}

impl Gamma0Conclusion {
    pub fn statement(self) -> &'static str {
        match self {
            Gamma0Conclusion::Empty => "M_0^B(p)(K) is empty",
            Gamma0Conclusion::EllipticPointsOnly => {
                "M_0^B(p)(K) is contained in the set of elliptic points of order 2 or 3"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gamma0Report {
    pub q: u64,
    pub d: u64,
    pub four_q: u64,
    #[serde(with = "crate::jsonint::vec")]
    pub excluded: Vec<BigInt>,
    #[serde(with = "crate::jsonint::vec")]
    pub unfactored_cofactors: Vec<BigInt>,
    #[serde(with = "crate::jsonint")]
    pub constant: BigInt,
    pub predicate: String,
    pub splits_over_k: bool,
    pub conclusion: Gamma0Conclusion,
    pub statement: String,
}

impl Gamma0Report {
    /// `Q(p)` for a prime `p`.
    pub fn holds(&self, p: &BigInt) -> bool {
        p > &BigInt::from(self.four_q)
            && p >= &BigInt::from(11)
            && p != &BigInt::from(13)
            && !excluded_by(p, self.d, &self.excluded, &self.unfactored_cofactors)
    }
}

pub fn assemble_gamma0_report(
    k: &NumberField,
    b: &QuaternionAlgebra,
    primed: &ExceptionalSets,
    unprimed: &ExceptionalSets,
    q: u64,
) -> Result<Gamma0Report> {
    check_auxiliary_prime(k, b, q)?;
    check_sets(primed, Variant::Primed)?;
    check_sets(unprimed, Variant::Unprimed)?;
    let (excluded, cofactors) = merge(&[primed, unprimed]);
    let four_q = 4 * q;
    let split = splits_over_k(b, k)?;
    let conclusion = if split {
        Gamma0Conclusion::Empty
    } else {
        Gamma0Conclusion::EllipticPointsOnly
    };
    let mut predicate = format!(
        "p > {four_q} and p >= 11 and p != 13 and p does not divide {} and p is not in N_1(K) or N'_1(K)",
        b.d
    );
    if !cofactors.is_empty() {
        predicate.push_str(" and p divides no unfactored cofactor");
    }
    Ok(Gamma0Report {
        q,
        d: b.d,
        four_q,
        constant: constant_of(four_q.max(13).max(largest_prime(b.d)), &excluded, &cofactors),
        excluded,
        unfactored_cofactors: cofactors,
        predicate,
        splits_over_k: split,
        conclusion,
        statement: conclusion.statement().to_string(),
    })
}
