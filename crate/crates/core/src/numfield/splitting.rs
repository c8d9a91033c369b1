//! Decomposition of rational primes: `(e_i, f_i)` data and the ramified set.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::field::NumberField;
use crate::error::{Error, Result};
use crate::polyarith::{factor_mod_p_seeded, factorize, is_prime_u64, FactorOptions, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingSource {
    /// Read off the factorization of `f` modulo `p` (Kummer-Dedekind).
    DefiningPolynomial,
    /// From a user-supplied factorization verified by ideal arithmetic.
    VerifiedFactorization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingData {
    pub p: u64,
    /// `(e_i, f_i)` for each prime above `p`.
    pub factors: Vec<(u32, u32)>,
    pub g: usize,
    pub source: SplittingSource,
}

impl SplittingData {
    pub(crate) fn new(p: u64, factors: Vec<(u32, u32)>, source: SplittingSource) -> Self {
        let g = factors.len();
        SplittingData { p, factors, g, source }
    }

    /// `(e, f, g)` when all primes above `p` share `e` and `f`, as in a Galois field.
    pub fn efg(&self) -> Option<(u32, u32, usize)> {
        let (e, f) = *self.factors.first()?;
        self.factors.iter().all(|&x| x == (e, f)).then_some((e, f, self.g))
    }

    /// `e_i * f_i` for each prime above `p`.
    pub fn local_degrees(&self) -> Vec<u32> {
        self.factors.iter().map(|(e, f)| e * f).collect()
    }

    pub fn degree_sum(&self) -> u32 {
        self.local_degrees().iter().sum()
    }

    pub fn is_ramified(&self) -> bool {
        self.factors.iter().any(|&(e, _)| e > 1)
    }
}

/// Primes dividing the basis discriminant, with a flag telling whether the set is only
/// an upper bound for `Ram(K)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedPrimes {
    pub primes: Vec<u64>,
    pub upper_bound_only: bool,
}

impl NumberField {
    pub fn splitting_data(&self, p: u64) -> Result<SplittingData> {
        self.splitting_data_seeded(p, DEFAULT_SEED)
    }

    pub fn splitting_data_seeded(&self, p: u64, seed: u64) -> Result<SplittingData> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if (self.index() % p).is_zero() {
            return self.stored_factorization(p).cloned().ok_or(Error::IndexDivisor(p));
        }
        let fac = factor_mod_p_seeded(self.defining_poly(), p, seed)?;
        let factors = fac
            .iter()
            .map(|(g, e)| (*e as u32, g.degree().expect("nonconstant factor") as u32))
            .collect();
        Ok(SplittingData::new(p, factors, SplittingSource::DefiningPolynomial))
    }

    /// True iff `q` has `n` distinct primes of degree 1 above it.
    pub fn splits_completely(&self, q: u64) -> Result<bool> {
        let sd = self.splitting_data(q)?;
        Ok(sd.g == self.degree() && sd.factors.iter().all(|&x| x == (1, 1)))
    }

    pub fn ramified_primes(&self) -> Result<RamifiedPrimes> {
        let fac = factorize(self.disc(), &FactorOptions::default());
        if !fac.is_complete() {
            return Err(Error::invalid(format!(
                "discriminant {} could not be fully factored",
                self.disc()
            )));
        }
        let primes = fac
            .primes
            .keys()
            .map(|p| {
                p.to_u64()
                    .ok_or_else(|| Error::invalid(format!("ramified prime {p} exceeds 64 bits")))
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(RamifiedPrimes {
            primes,
            upper_bound_only: self.maximality_assumed(),
        })
    }

    /// Residue roots `r` with `f(r) = 0 mod q`, ascending.
    pub fn roots_mod(&self, q: u64) -> Vec<u64> {
        let f = self.defining_poly();
        let qb = BigInt::from(q);
        let fac = factor_mod_p_seeded(f, q, DEFAULT_SEED).unwrap_or_default();
        let mut roots: Vec<u64> = fac
            .iter()
            .filter(|(g, _)| g.degree() == Some(1))
            .map(|(g, _)| (q - g.coeffs()[0] % q) % q)
            .collect();
        roots.sort_unstable();
        debug_assert!(roots
            .iter()
            .all(|&r| (f.eval(&BigInt::from(r)) % &qb).is_zero() || qb.is_one()));
        roots
    }
}
