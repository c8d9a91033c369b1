//! Integer number theory: Jacobi symbols, primality, factorization.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ecm::ecm_u128;
use super::mont::pollard_brent_u128;
use crate::error::{Error, Result};

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi_symbol(a: &BigInt, n: &BigInt) -> Result<i8> {
    if !n.is_positive() || n.is_even() {
        return Err(Error::invalid(format!("Jacobi symbol needs odd positive n, got {n}")));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().expect("small");
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Kronecker symbol `(a | n)` for any `n`.
pub fn kronecker_symbol(a: &BigInt, n: &BigInt) -> i8 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut n = n.clone();
    let mut t = 1i8;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            t = -t;
        }
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        if a.is_even() {
            return 0;
        }
        let r = a.mod_floor(&BigInt::from(8)).to_u32().expect("small");
        if tz % 2 == 1 && (r == 3 || r == 5) {
            t = -t;
        }
        n >>= tz;
    }
    t * jacobi_symbol(a, &n).expect("n odd positive")
}

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    /// Proven prime (deterministic witness set below 3.3e24, or trial division).
    Prime,
    /// Passed 40 strong-probable-prime rounds; not proven.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

const SMALL_PRIMES: [u32; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

fn strong_probable_prime(n: &BigInt, base: &BigInt) -> bool {
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().expect("n > 2");
    let d = &n1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Primality with a proof/probable distinction.
///
/// Below 3317044064679887385961981 the first thirteen prime bases are a proven witness
/// set (Sorenson-Webster). Above it, the first forty prime bases give a strong probable
/// prime.
pub fn primality(n: &BigInt) -> Primality {
    if n < &BigInt::from(2) {
        return Primality::Composite;
    }
    for &p in &SMALL_PRIMES {
        if n == &BigInt::from(p) {
            return Primality::Prime;
        }
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let proven_range = n < &BigInt::from(3_317_044_064_679_887_385_961_981u128);
    let rounds = if proven_range { 13 } else { SMALL_PRIMES.len() };
    for &b in &SMALL_PRIMES[..rounds] {
        if !strong_probable_prime(n, &BigInt::from(b)) {
            return Primality::Composite;
        }
    }
    if proven_range {
        Primality::Prime
    } else {
        Primality::ProbablePrime
    }
}

pub fn is_prime(n: &BigInt) -> bool {
    primality(n).is_prime()
}

pub fn is_prime_u64(n: u64) -> bool {
    primality(&BigInt::from(n)) == Primality::Prime
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigInt) -> BigInt {
    let mut c = n + 1u32;
    while !is_prime(&c) {
        c += 1u32;
    }
    c
}

/// Primes `<= limit` by sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

pub fn is_squarefree(n: &BigInt) -> bool {
    let f = factorize(n, &FactorOptions::default());
    f.cofactors.is_empty() && f.primes.values().all(|(e, _)| *e == 1)
}

/// Effort limits for [`factorize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorOptions {
    pub trial_limit: u64,
    /// Iteration cap per Pollard-Brent attempt on cofactors below 2^126.
    pub rho_iterations: u64,
    /// Iteration cap per attempt on wider cofactors.
    pub wide_rho_iterations: u64,
    /// Number of polynomial constants tried per cofactor.
    pub rho_attempts: u32,
    pub wide_rho_attempts: u32,
    /// Elliptic curve stage 1 bound for cofactors below 2^126, after rho fails.
    pub ecm_b1: u64,
    pub ecm_curves: u32,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            trial_limit: 1_000_000,
            rho_iterations: 200_000,
            wide_rho_iterations: 25_000,
            rho_attempts: 1,
            wide_rho_attempts: 1,
            ecm_b1: 11_000,
            ecm_curves: 80,
        }
    }
}

/// Prime factorization of `|n|`, possibly with unsplit composite cofactors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization {
    /// prime -> (exponent, primality flag)
    pub primes: BTreeMap<BigInt, (u32, Primality)>,
    /// Composite parts the rho budget did not split.
    pub cofactors: Vec<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactors.is_empty()
    }

    fn add_prime(&mut self, p: BigInt, flag: Primality) {
        let e = self.primes.entry(p).or_insert((0, flag));
        e.0 += 1;
    }
}

static TRIAL_PRIMES: std::sync::OnceLock<(u64, Vec<u32>)> = std::sync::OnceLock::new();

fn trial_primes(limit: u64) -> Vec<u32> {
    let (l, v) = TRIAL_PRIMES.get_or_init(|| {
        let l = 1_000_000u64;
        (l, primes_up_to(l).into_iter().map(|p| p as u32).collect())
    });
    if limit <= *l {
        v.iter().copied().take_while(|&p| u64::from(p) <= limit).collect()
    } else {
        primes_up_to(limit).into_iter().map(|p| p as u32).collect()
    }
}

static TRIAL_PRODUCTS: std::sync::Mutex<BTreeMap<u64, std::sync::Arc<BigInt>>> = std::sync::Mutex::new(BTreeMap::new());

/// Product of the primes up to `limit`, cached per limit.
fn trial_product(limit: u64) -> std::sync::Arc<BigInt> {
    let mut cache = TRIAL_PRODUCTS.lock().unwrap_or_else(|e| e.into_inner());
    cache
        .entry(limit)
        .or_insert_with(|| {
            // balanced product tree
            let mut level: Vec<BigInt> = trial_primes(limit).into_iter().map(BigInt::from).collect();
            while level.len() > 1 {
                level = level.chunks(2).map(|c| c.iter().product()).collect();
            }
            std::sync::Arc::new(level.pop().unwrap_or_else(BigInt::one))
        })
        .clone()
}

/// Removes every prime factor up to `limit` from `m`. The primes are located through
/// `gcd(m, prod p)` so the per-prime work runs on that gcd rather than on `m`.
fn trial_divide(m: &mut BigInt, limit: u64, out: &mut Factorization) {
    let product = trial_product(limit);
    let reduced = if *product > *m {
        &*product % &*m
    } else {
        (*product).clone()
    };
    let mut g = m.gcd(&reduced);
    let mut small = g.to_u64();
    for p in trial_primes(limit) {
        let p64 = u64::from(p);
        let divides = match small {
            Some(1) => break,
            Some(s) => {
                if p64.saturating_mul(p64) > s {
                    // what is left of the gcd is a single prime
                    strip(m, s, out);
                    break;
                }
                s % p64 == 0
            }
            None => (&g % p64).is_zero(),
        };
        if divides {
            match small.as_mut() {
                Some(s) => *s /= p64,
                None => {
                    g /= p64;
                    small = g.to_u64();
                }
            }
            strip(m, p64, out);
        }
    }
}

fn strip(m: &mut BigInt, p: u64, out: &mut Factorization) {
    while (&*m % p).is_zero() {
        *m /= p;
        out.add_prime(BigInt::from(p), Primality::Prime);
    }
}

/// Trial division up to `opts.trial_limit`, then Pollard-Brent rho.
pub fn factorize(n: &BigInt, opts: &FactorOptions) -> Factorization {
    let mut out = Factorization::default();
    let mut m = n.abs();
    if m.is_zero() {
        return out;
    }
    trial_divide(&mut m, opts.trial_limit, &mut out);
    if m.is_one() {
        return out;
    }
    let bound = BigInt::from(opts.trial_limit);
    if m <= &bound * &bound {
        // no factor below the trial limit, so m is prime
        out.add_prime(m, Primality::Prime);
        return out;
    }
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        let flag = primality(&c);
        if flag.is_prime() {
            out.add_prime(c, flag);
            continue;
        }
        if let Some((r, k)) = perfect_power(&c) {
            for _ in 0..k {
                stack.push(r.clone());
            }
            continue;
        }
        let split = match c.to_u128().filter(|_| c.bits() <= 126) {
            Some(small) => pollard_brent_u128(small, opts.rho_iterations, opts.rho_attempts)
                .or_else(|| ecm_u128(small, opts.ecm_b1, opts.ecm_curves))
                .map(BigInt::from),
            None => pollard_brent(&c, opts),
        };
        match split {
            Some(d) => {
                let e = &c / &d;
                stack.push(d);
                stack.push(e);
            }
            None => out.cofactors.push(c),
        }
    }
    out.cofactors.sort();
    out
}

/// `(r, k)` with `r^k = n` for a prime `k`, if any.
fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    for k in primes_up_to(n.bits()) {
        let k = k as u32;
        let r = n.nth_root(k);
        if r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Brent's cycle-finding variant of Pollard rho with deterministic constants.
fn pollard_brent(n: &BigInt, opts: &FactorOptions) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    for attempt in 0..opts.wide_rho_attempts {
        let c = BigInt::from(2 * attempt + 1);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2 + attempt);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut iters = 0u64;
        let m = 128u64;
        while g.is_one() && iters < opts.wide_rho_iterations {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = q * (&x - &y).abs() % n;
                }
                g = q.gcd(n);
                k += m;
                iters += m.min(r);
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

/// Distinct prime divisors of a nonzero integer of modest size (complete factorization
/// required).
pub fn prime_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let f = factorize(n, &FactorOptions::default());
    if !f.is_complete() {
        return Err(Error::invalid(format!("could not completely factor {n}")));
    }
    Ok(f.primes.into_keys().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(&b(3), &b(11)).unwrap(), 1);
        assert_eq!(jacobi_symbol(&b(11), &b(3)).unwrap(), -1);
        assert_eq!(jacobi_symbol(&b(12345), &b(1)).unwrap(), 1);
        assert_eq!(jacobi_symbol(&b(6), &b(9)).unwrap(), 0);
        assert!(jacobi_symbol(&b(3), &b(10)).is_err());
        assert!(jacobi_symbol(&b(3), &b(-7)).is_err());
    }

    #[test]
    fn kronecker_two() {
        assert_eq!(kronecker_symbol(&b(-15), &b(2)), 1);
        assert_eq!(kronecker_symbol(&b(-20), &b(2)), 0);
        assert_eq!(kronecker_symbol(&b(5), &b(2)), -1);
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&b(23)));
        assert!(!is_prime(&b(1)));
        assert!(!is_prime(&b(15624)));
        assert!(!is_prime(&b(-7)));
        // Carmichael number
        assert!(!is_prime(&b(561)));
        assert_eq!(primality(&b(131071)), Primality::Prime);
        let m127 = (BigInt::one() << 127) - 1u32;
        assert_eq!(primality(&m127), Primality::ProbablePrime);
        assert_eq!(primality(&(&m127 * 3u32)), Primality::Composite);
    }

    #[test]
    fn sieve_matches_primality() {
        let ps = primes_up_to(1000);
        for k in 0..=1000u64 {
            assert_eq!(ps.binary_search(&k).is_ok(), is_prime_u64(k), "{k}");
        }
    }

    #[test]
    fn factorization_recombines() {
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64) * 12u32;
        let f = factorize(&n, &FactorOptions::default());
        assert!(f.is_complete());
        let back = f.primes.iter().fold(BigInt::one(), |acc, (p, (e, _))| {
            acc * num_traits::pow(p.clone(), *e as usize)
        });
        assert_eq!(back, n);
        assert_eq!(f.primes.len(), 4);
    }

    #[test]
    fn factorization_with_large_square() {
        let p = BigInt::from(4_294_967_311u64);
        let n = &p * &p * 7u32;
        let f = factorize(&n, &FactorOptions::default());
        assert_eq!(f.primes.get(&p).map(|e| e.0), Some(2));
    }

    #[test]
    fn splits_mid_size_semiprime_cofactor() {
        // 2^4 7^8 1249 p q, a norm value whose cofactor pq has no factor below 10^14
        let n: BigInt = "36703366700336557079405571920928898076176".parse().unwrap();
        let f = factorize(&n, &FactorOptions::default());
        assert!(f.is_complete());
        let big: Vec<String> = f
            .primes
            .keys()
            .filter(|p| p.bits() > 40)
            .map(|p| p.to_string())
            .collect();
        assert_eq!(big, vec!["137840047557841", "2311339531970929"]);
        assert!(f.primes.values().all(|(_, flag)| *flag == Primality::Prime));
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(&b(30)));
        assert!(!is_squarefree(&b(12)));
    }
}
