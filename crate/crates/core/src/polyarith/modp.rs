//! Polynomials over the prime field F_p and their factorization.
//!
//! Factorization runs squarefree decomposition, distinct-degree splitting and
//! Cantor-Zassenhaus equal-degree splitting. Random choices come from a seeded
//! ChaCha stream; the returned factor list is sorted so the output does not depend on
//! the seed.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integer::is_prime_u64;
use crate::error::{Error, Result};
use crate::IntPolynomial;

pub const DEFAULT_SEED: u64 = 0x5eed_0f_f1e1d;

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invm(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    powm(a, p - 2, p)
}

/// Reduces an integer into `[0, p)`.
pub fn reduce_mod(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Polynomial over F_p, coefficients in `[0, p)` lowest degree first, normalized.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|v| v % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, coeffs: c }
    }

    pub fn from_int(f: &IntPolynomial, p: u64) -> Self {
        Self::new(p, f.coeffs().iter().map(|c| reduce_mod(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Lift with coefficients in `[0, p)`.
    pub fn to_int(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Lift with coefficients in `(-p/2, p/2]`.
    pub fn to_int_symmetric(&self) -> IntPolynomial {
        let half = self.p / 2;
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > half {
                        BigInt::from(c) - self.p
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| addm(mulm(acc, x, self.p), c, self.p))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| addm(self.c(i), o.c(i), self.p)).collect();
        Self::new(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| subm(self.c(i), o.c(i), self.p)).collect();
        Self::new(self.p, c)
    }

    fn c(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(a, b, self.p), self.p);
            }
        }
        Self::new(self.p, out)
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| mulm(c, s, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invm(self.leading(), self.p))
    }

    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        assert!(!b.is_zero(), "division by zero polynomial mod {}", self.p);
        let p = self.p;
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return (Self::zero(p), self.clone());
        }
        let inv = invm(b.leading(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.deg() - db + 1];
        while r.len() > db {
            let lead = mulm(r.pop().expect("nonempty"), inv, p);
            let shift = r.len() - db;
            q[shift] = lead;
            if lead == 0 {
                continue;
            }
            for (i, &c) in b.coeffs[..db].iter().enumerate() {
                r[shift + i] = subm(r[shift + i], mulm(lead, c, p), p);
            }
        }
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, b: &Self) -> Self {
        self.div_rem(b).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, (i as u64) % p, p))
            .collect();
        Self::new(p, c)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }

    /// Canonical order: degree, then coefficients from the top down.
    fn sort_key(&self) -> (usize, Vec<u64>) {
        (self.deg(), self.coeffs.iter().rev().copied().collect())
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.to_int(), self.p)
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, k)` with `f = prod g^k`.
fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if !fac.is_one() {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power: take the p-th root coefficientwise (Frobenius is the identity on F_p)
        let root = ModPoly::new(p, c.coeffs.iter().step_by(p as usize).copied().collect());
        for (g, k) in squarefree_decomposition(&root.monic()) {
            out.push((g, k * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = ModPoly::x(p);
    let mut h = x.rem(&rest);
    let pe = BigUint::from(p);
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(&pe, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dd = rest.deg();
        out.push((rest, dd));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
fn equal_degree(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let p = f.p;
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let exp = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
    loop {
        let a = ModPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc.gcd(f)
        } else {
            let g0 = a.gcd(f);
            if !g0.is_one() {
                g0
            } else {
                a.pow_mod(&exp, f).sub(&ModPoly::one(p)).gcd(f)
            }
        };
        if !g.is_one() && g.deg() < n {
            let h = f.div_rem(&g).0.monic();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Factors `f mod p` into monic irreducibles with multiplicities, sorted by degree then
/// coefficients.
pub fn factor_mod_p(f: &IntPolynomial, p: u64) -> Result<Vec<(ModPoly, usize)>> {
    factor_mod_p_seeded(f, p, DEFAULT_SEED)
}

pub fn factor_mod_p_seeded(f: &IntPolynomial, p: u64, seed: u64) -> Result<Vec<(ModPoly, usize)>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let fp = ModPoly::from_int(f, p);
    if fp.is_zero() {
        return Err(Error::ZeroModP(p));
    }
    Ok(factor_modpoly(&fp, seed))
}

pub fn factor_modpoly(fp: &ModPoly, seed: u64) -> Vec<(ModPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fp.p);
    let mut out = Vec::new();
    if fp.deg() == 0 {
        return out;
    }
    for (sq, k) in squarefree_decomposition(&fp.monic()) {
        for (g, d) in distinct_degree(&sq) {
            for h in equal_degree(&g, d, &mut rng) {
                out.push((h, k));
            }
        }
    }
    out.sort_by_key(|a| a.0.sort_key());
    out
}

/// Rabin-style irreducibility check via distinct-degree factorization.
pub fn is_irreducible_mod_p(f: &ModPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let m = f.monic();
    if !m.gcd(&m.derivative()).is_one() {
        return false;
    }
    let dd = distinct_degree(&m);
    dd.len() == 1 && dd[0].1 == n
}

/// Dedekind's criterion: true iff `Z[theta]` is maximal at `p` for `theta` a root of the
/// monic polynomial `f`.
pub fn dedekind_p_maximal(f: &IntPolynomial, p: u64) -> Result<bool> {
    let factors = factor_mod_p(f, p)?;
    let g = factors.iter().fold(ModPoly::one(p), |acc, (h, _)| acc.mul(h));
    let fp = ModPoly::from_int(f, p);
    let h = fp.div_rem(&g).0;
    let gi = g.to_int();
    let hi = h.to_int();
    let diff = &(&gi * &hi) - f;
    let pb = BigInt::from(p);
    let big_f = IntPolynomial::new(diff.coeffs().iter().map(|c| c / &pb).collect());
    let ff = ModPoly::from_int(&big_f, p);
    let d = ff.gcd(&g).gcd(&h);
    Ok(d.is_one())
}

/// Linear algebra over F_p: the minimal polynomial of the sequence `v_0, v_1, ...` is
/// found by detecting the first linear dependence.
pub fn first_dependence(vectors: &[Vec<u64>], p: u64) -> Option<Vec<u64>> {
    // Row-reduce while tracking combinations; returns coefficients c with sum c_i v_i = 0
    // and c_last = 1, for the first prefix that is dependent.
    let dim = vectors.first().map_or(0, Vec::len);
    let mut basis: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    for (k, v) in vectors.iter().enumerate() {
        let mut cur = v.clone();
        let mut comb = vec![0u64; vectors.len()];
        comb[k] = 1;
        for (bv, bc, piv) in &basis {
            let f = cur[*piv];
            if f != 0 {
                for i in 0..dim {
                    cur[i] = subm(cur[i], mulm(f, bv[i], p), p);
                }
                for i in 0..comb.len() {
                    comb[i] = subm(comb[i], mulm(f, bc[i], p), p);
                }
            }
        }
        match cur.iter().position(|&c| c != 0) {
            None => {
                comb.truncate(k + 1);
                return Some(comb);
            }
            Some(piv) => {
                let inv = invm(cur[piv], p);
                let cur: Vec<u64> = cur.iter().map(|&c| mulm(c, inv, p)).collect();
                let comb: Vec<u64> = comb.iter().map(|&c| mulm(c, inv, p)).collect();
                basis.push((cur, comb, piv));
            }
        }
    }
    None
}

/// Row echelon form over F_p in place; returns the pivot column of each nonzero row.
fn echelon_mod_p(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] % p != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = invm(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = mulm(*v, inv, p);
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                let pr = rows[r].clone();
                for (t, &b) in rows[k].iter_mut().zip(&pr) {
                    *t = subm(*t, mulm(f, b, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a matrix over F_p given as rows with entries in `[0, p)`.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m = rows.to_vec();
    echelon_mod_p(&mut m, p).len()
}

/// Basis of the right kernel `{x : A x = 0}` of a matrix over F_p with `ncols` columns.
pub fn kernel_mod_p(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = echelon_mod_p(&mut m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u64; ncols];
            x[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = subm(0, row[fc], p);
            }
            x
        })
        .collect()
}

impl ModPoly {
    pub fn is_irreducible(&self) -> bool {
        is_irreducible_mod_p(self)
    }
}

/// Multiplies out a factor list with multiplicities.
pub fn factor_product(factors: &[(ModPoly, usize)], p: u64) -> ModPoly {
    factors
        .iter()
        .fold(ModPoly::one(p), |acc, (g, k)| (0..*k).fold(acc, |a, _| a.mul(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn kernel_and_rank() {
        // rows (1,2,3), (2,4,6) over F_7: rank 1, kernel of dimension 2
        let a = vec![vec![1, 2, 3], vec![2, 4, 6]];
        assert_eq!(rank_mod_p(&a, 7), 1);
        let k = kernel_mod_p(&a, 3, 7);
        assert_eq!(k.len(), 2);
        for x in &k {
            let dot = (x[0] + 2 * x[1] + 3 * x[2]) % 7;
            assert_eq!(dot, 0);
        }
        assert_eq!(kernel_mod_p(&[vec![1, 0], vec![0, 1]], 2, 5), Vec::<Vec<u64>>::new());
    }

    #[test]
    fn x2_plus_1_mod_5() {
        let f = factor_mod_p(&ip(&[1, 0, 1]), 5).unwrap();
        assert_eq!(
            f,
            vec![(ModPoly::new(5, vec![2, 1]), 1), (ModPoly::new(5, vec![3, 1]), 1)]
        );
    }

    #[test]
    fn x2_plus_1_mod_3_irreducible() {
        let f = factor_mod_p(&ip(&[1, 0, 1]), 3).unwrap();
        assert_eq!(f, vec![(ModPoly::new(3, vec![1, 0, 1]), 1)]);
    }

    #[test]
    fn repeated_root() {
        let f = factor_mod_p(&ip(&[0, 0, 1]), 7).unwrap();
        assert_eq!(f, vec![(ModPoly::new(7, vec![0, 1]), 2)]);
    }

    #[test]
    fn zero_mod_p_is_error() {
        assert_eq!(factor_mod_p(&ip(&[5, 10]), 5), Err(Error::ZeroModP(5)));
        assert!(factor_mod_p(&ip(&[1, 1]), 4).is_err());
    }

    #[test]
    fn pth_powers_in_characteristic_p() {
        // (x+1)^4 (x^2+x+1) over F_2
        let f = &ip(&[1, 1]).pow(4) * &ip(&[1, 1, 1]);
        let fac = factor_mod_p(&f, 2).unwrap();
        assert_eq!(
            fac,
            vec![(ModPoly::new(2, vec![1, 1]), 4), (ModPoly::new(2, vec![1, 1, 1]), 1)]
        );
    }

    #[test]
    fn cyclotomic_17_mod_2() {
        let phi: Vec<i64> = vec![1; 17];
        let fac = factor_mod_p(&ip(&phi), 2).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, k)| g.degree() == Some(8) && *k == 1));
        assert_eq!(factor_product(&fac, 2), ModPoly::from_int(&ip(&phi), 2));
    }

    #[test]
    fn dedekind_examples() {
        // x^2 + 5: Z[sqrt(-5)] is maximal
        assert!(dedekind_p_maximal(&ip(&[5, 0, 1]), 2).unwrap());
        // x^2 + 3: Z[sqrt(-3)] has index 2
        assert!(!dedekind_p_maximal(&ip(&[3, 0, 1]), 2).unwrap());
        // cyclotomic polynomials are maximal at their prime
        assert!(dedekind_p_maximal(&ip(&[1, 1, 1, 1, 1]), 5).unwrap());
    }

    #[test]
    fn dependence_finds_minimal_relation() {
        let v = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let c = first_dependence(&v, 7).unwrap();
        assert_eq!(c, vec![6, 6, 1]);
    }
}
