//! Quaternion algebras `(a, b / Q)`: Hilbert symbols, ramification, presentations and
//! splitting over quadratic fields and over a number field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::polyarith::{is_prime_u64, is_squarefree, jacobi_symbol, prime_divisors};

/// A place of Q. Finite places sort before the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "infinity" | "oo" => Ok(Place::Infinite),
            _ => {
                let p: u64 = s
                    .parse()
                    .map_err(|_| Error::invalid(format!("`{s}` is neither a prime nor `inf`")))?;
                if !is_prime_u64(p) {
                    return Err(Error::NotPrime(s.to_string()));
                }
                Ok(Place::Finite(p))
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `n = p^v u` with `p` not dividing `u`.
fn split_valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let mut u = n.clone();
    let mut v = 0;
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

fn mod8(u: &BigInt) -> u32 {
    u.mod_floor(&BigInt::from(8)).to_u32().expect("small")
}

/// Hilbert symbol of nonzero integers.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, v: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::invalid("Hilbert symbol of zero"));
    }
    let p = match v {
        Place::Infinite => return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => p,
    };
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let (al, u) = split_valuation(a, p);
    let (be, w) = split_valuation(b, p);
    if p == 2 {
        let eps = |x: &BigInt| (mod8(x) - 1) / 2 % 2;
        let omega = |x: &BigInt| {
            let r = mod8(x);
            (r * r - 1) / 8 % 2
        };
        let e = eps(&u) * eps(&w) + al * omega(&w) + be * omega(&u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let pb = BigInt::from(p);
    let mut s: i8 = if (al * be) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
    if be % 2 == 1 {
        s *= jacobi_symbol(&u, &pb)?;
    }
    if al % 2 == 1 {
        s *= jacobi_symbol(&w, &pb)?;
    }
    Ok(s)
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: Place) -> Result<i8> {
    // n/d and n*d differ by the square d^2
    let a = a.numer() * a.denom();
    let b = b.numer() * b.denom();
    hilbert_symbol_int(&a, &b, v)
}

/// Places where `(a, b / Q)` ramifies, in place order.
pub fn ramification_set(a: &BigInt, b: &BigInt) -> Result<Vec<Place>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::invalid("quaternion parameters must be nonzero"));
    }
    let mut places: Vec<Place> = prime_divisors(&(a * b * 2))?
        .iter()
        .map(|p| p.to_u64().map(Place::Finite))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::invalid("prime divisor exceeds 64 bits"))?;
    places.push(Place::Infinite);
    let mut ram = Vec::new();
    for v in places {
        if hilbert_symbol_int(a, b, v)? == -1 {
            ram.push(v);
        }
    }
    if ram.len() % 2 == 1 {
        return Err(Error::Internal(format!(
            "product formula fails for ({a}, {b}): ramified at {ram:?}"
        )));
    }
    Ok(ram)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionAlgebra {
    #[serde(with = "crate::jsonint")]
    pub a: BigInt,
    #[serde(with = "crate::jsonint")]
    pub b: BigInt,
    pub ram: Vec<Place>,
    pub d: u64,
}

impl QuaternionAlgebra {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        let ram = ramification_set(&a, &b)?;
        let mut d = 1u64;
        for v in &ram {
            if let Place::Finite(p) = v {
                d = d
                    .checked_mul(*p)
                    .ok_or_else(|| Error::invalid("discriminant exceeds 64 bits"))?;
            }
        }
        Ok(QuaternionAlgebra { a, b, ram, d })
    }

    pub fn is_indefinite(&self) -> bool {
        !self.ram.contains(&Place::Infinite)
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        self.ram
            .iter()
            .filter_map(|v| match v {
                Place::Finite(p) => Some(*p),
                Place::Infinite => None,
            })
            .collect()
    }
}

/// Prime factors of a valid indefinite discriminant.
pub fn discriminant_primes(d: u64) -> Result<Vec<u64>> {
    if d < 2 || !is_squarefree(&BigInt::from(d)) {
        return Err(Error::invalid(format!("{d} is not a squarefree integer > 1")));
    }
    let primes: Vec<u64> = prime_divisors(&BigInt::from(d))?
        .iter()
        .map(|p| p.to_u64().expect("divides a u64"))
        .collect();
    if primes.len() % 2 == 1 {
        return Err(Error::invalid(format!(
            "{d} has an odd number of prime factors; no indefinite algebra has this discriminant"
        )));
    }
    Ok(primes)
}

pub const DEFAULT_PRESENTATION_BOUND: u64 = 200;

/// First `(a, b)` in `(|a| + |b|, a, b)` order with ramification exactly the primes of `d`.
pub fn find_presentation(d: u64) -> Result<QuaternionAlgebra> {
    let primes = discriminant_primes(d)?;
    let target: Vec<Place> = primes.iter().map(|&p| Place::Finite(p)).collect();
    let mut bound = DEFAULT_PRESENTATION_BOUND as i64;
    loop {
        for s in 2..=2 * bound {
            for a in -s + 1..s {
                let rest = s - a.abs();
                if a == 0 || a.abs() > bound || rest > bound {
                    continue;
                }
                for b in [-rest, rest] {
                    let (ab, bb) = (BigInt::from(a), BigInt::from(b));
                    // every odd ramified prime divides ab
                    if primes.iter().any(|&p| p != 2 && !(&ab * &bb % p).is_zero()) {
                        continue;
                    }
                    if ramification_set(&ab, &bb)? == target {
                        return QuaternionAlgebra::new(ab, bb);
                    }
                }
            }
        }
        bound *= 2;
    }
}

/// Whether `p` splits in `Q(sqrt(-r))`, using only `r mod 8p`; `r` need not be prime.
fn splits_in_imag_quad(p: u64, r: u64) -> bool {
    if p == 2 {
        return r % 8 == 7;
    }
    let minus_r = BigInt::from(p) - BigInt::from(r % p);
    jacobi_symbol(&minus_r, &BigInt::from(p)).expect("p odd") == 1
}

/// `B ⊗ Q(sqrt(-q))` is a division algebra iff some prime of `d` splits in `Q(sqrt(-q))`.
pub fn nonsplit_over_imag_quad(b: &QuaternionAlgebra, q: u64) -> bool {
    nonsplit_witness(b, q).is_some()
}

/// The least prime of `d` that splits in `Q(sqrt(-q))`.
pub fn nonsplit_witness(b: &QuaternionAlgebra, q: u64) -> Option<u64> {
    b.ramified_primes().into_iter().find(|&p| splits_in_imag_quad(p, q))
}

/// `(M, residues)`: the classes `r mod M` that can contain a prime `q` and on which
/// `B ⊗ Q(sqrt(-q))` is not split, with `M = 8 * prod of odd p | d`.
pub fn congruence_classes_nonsplit(d: u64) -> Result<(u64, Vec<u64>)> {
    let primes = discriminant_primes(d)?;
    let m: u64 = 8 * primes.iter().filter(|&&p| p != 2).product::<u64>();
    let residues = (1..m)
        .filter(|&r| r.gcd(&m) == 1 || (is_prime_u64(r) && m % r == 0))
        .filter(|&r| primes.iter().any(|&p| splits_in_imag_quad(p, r)))
        .collect();
    Ok((m, residues))
}

/// `B ⊗ K ≅ M_2(K)` iff every local degree `e f` above every `p | d` is even.
pub fn splits_over_k(b: &QuaternionAlgebra, k: &NumberField) -> Result<bool> {
    for p in b.ramified_primes() {
        let sd = k.splitting_data(p)?;
        if sd.local_degrees().iter().any(|ef| ef % 2 == 1) {
            return Ok(false);
        }
    }
    Ok(k.real_places()? == 0 || b.is_indefinite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::bundled;

    fn h(a: i64, b: i64, v: Place) -> i8 {
        hilbert_symbol_int(&BigInt::from(a), &BigInt::from(b), v).unwrap()
    }

    fn ram(a: i64, b: i64) -> Vec<Place> {
        ramification_set(&BigInt::from(a), &BigInt::from(b)).unwrap()
    }

    #[test]
    fn symbols_behind_the_conic_models() {
        assert_eq!(h(-1, -3, Place::Finite(3)), -1);
        assert_eq!(h(-1, -2, Place::Finite(2)), -1);
        assert_eq!(h(-1, -3, Place::Finite(5)), 1);
        assert_eq!(h(1, -7, Place::Finite(7)), 1);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let q = hilbert_symbol(&half, &BigRational::from_integer(BigInt::from(-1)), Place::Finite(2)).unwrap();
        assert_eq!(q, h(2, -1, Place::Finite(2)));
        assert!(hilbert_symbol_int(&BigInt::zero(), &BigInt::from(1), Place::Infinite).is_err());
    }

    #[test]
    fn ramification_of_small_algebras() {
        assert_eq!(ram(-1, -1), vec![Place::Finite(2), Place::Infinite]);
        assert_eq!(ram(-1, 3), vec![Place::Finite(2), Place::Finite(3)]);
        assert_eq!(ram(1, 1), vec![]);
    }

    #[test]
    fn presentations_have_the_right_discriminant() {
        for d in [6u64, 10, 22, 15, 2 * 3 * 5 * 7] {
            let b = find_presentation(d).unwrap();
            assert_eq!(b.d, d);
            assert!(b.is_indefinite());
            assert_eq!(ram(b.a.to_i64().unwrap(), b.b.to_i64().unwrap()), b.ram);
        }
        assert!(find_presentation(30).is_err());
        assert!(find_presentation(12).is_err());
        assert!(find_presentation(1).is_err());
    }

    #[test]
    fn nonsplit_examples() {
        let b6 = find_presentation(6).unwrap();
        let b10 = find_presentation(10).unwrap();
        assert!(nonsplit_over_imag_quad(&b6, 23));
        assert!(nonsplit_over_imag_quad(&b10, 11));
        assert!(!nonsplit_over_imag_quad(&b6, 13));
    }

    #[test]
    fn congruence_lists() {
        assert_eq!(congruence_classes_nonsplit(6).unwrap(), (24, vec![2, 5, 7, 11, 17, 23]));
        assert_eq!(
            congruence_classes_nonsplit(10).unwrap(),
            (40, vec![1, 7, 9, 11, 19, 21, 23, 29, 31, 39])
        );
        assert_eq!(
            congruence_classes_nonsplit(22).unwrap(),
            (
                88,
                vec![
                    2, 7, 13, 15, 17, 19, 21, 23, 29, 31, 35, 39, 41, 43, 47, 51, 57, 61, 63, 65, 71, 73, 79, 83, 85,
                    87
                ]
            )
        );
    }

    #[test]
    fn splitting_over_bundled_fields() {
        let b22 = find_presentation(22).unwrap();
        let b6 = find_presentation(6).unwrap();
        let b10 = find_presentation(10).unwrap();
        assert!(!splits_over_k(&b22, &bundled::field("q_zeta5").unwrap()).unwrap());
        assert!(splits_over_k(&b6, &bundled::field("q_sqrt3_sqrt_m5").unwrap()).unwrap());
        assert!(splits_over_k(&b10, &bundled::field("q_zeta17").unwrap()).unwrap());
        assert!(!splits_over_k(&b6, &bundled::field("rationals").unwrap()).unwrap());
    }
}
