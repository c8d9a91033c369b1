//! Weil `q`-numbers of weight one: the roots of `x^2 + a x + q` with `|a| <= 2 sqrt(q)`.

use num_bigint::BigInt;
use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyarith::is_prime_u64;

/// The pair `beta, conj(beta)` of roots of `x^2 + a x + q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FrobeniusRoot {
    pub a: i64,
    pub q: u64,
}

impl FrobeniusRoot {
    pub fn new(a: i64, q: u64) -> Result<Self> {
        if !is_prime_u64(q) {
            return Err(Error::NotPrime(q.to_string()));
        }
        if (a as i128) * (a as i128) > 4 * q as i128 {
            return Err(Error::invalid(format!("|{a}| exceeds 2 sqrt({q})")));
        }
        Ok(FrobeniusRoot { a, q })
    }

    /// `a^2 - 4q`, always negative.
    pub fn discriminant(&self) -> i128 {
        (self.a as i128).pow(2) - 4 * self.q as i128
    }
}

/// All `a` with `a^2 <= 4q`, ascending.
pub fn frobenius_roots(q: u64) -> Result<Vec<FrobeniusRoot>> {
    if !is_prime_u64(q) {
        return Err(Error::NotPrime(q.to_string()));
    }
    let bound = (4 * q).sqrt() as i64;
    Ok((-bound..=bound).map(|a| FrobeniusRoot { a, q }).collect())
}

/// `t_m = beta^m + conj(beta)^m` by `t_{k+1} = -a t_k - q t_{k-1}`.
pub fn beta_power_trace(root: &FrobeniusRoot, m: u32) -> BigInt {
    let a = BigInt::from(root.a);
    let q = BigInt::from(root.q);
    let (mut prev, mut cur) = (BigInt::from(2), -a.clone());
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        let next = -&a * &cur - &q * &prev;
        prev = cur;
        cur = next;
    }
    cur
}
