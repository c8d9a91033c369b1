//! Exponent vectors in `Z[Gal(K/Q)]`, the elements `alpha^epsilon`, and the norm values
//! `N_{K(beta)/Q}(alpha^epsilon - beta^m)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::weil::{beta_power_trace, FrobeniusRoot};
use crate::error::{Error, Result};
use crate::numfield::{FieldElement, NumberField};
use crate::IntPolynomial;

/// Which of the two exceptional-set families is being built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Exponents `{0,4,6,8,12}` against `beta^{12h}`.
    Primed,
    /// Exponents `{0,8,12,16,24}` against `beta^{24h}`.
    Unprimed,
}

impl Variant {
    pub const fn exponent_values(self) -> [u32; 5] {
        match self {
            Variant::Primed => [0, 4, 6, 8, 12],
            Variant::Unprimed => [0, 8, 12, 16, 24],
        }
    }

    /// The power `m` of `beta`: `12h` or `24h`.
    pub fn beta_exponent(self, h: u64) -> Result<u32> {
        let k = match self {
            Variant::Primed => 12,
            Variant::Unprimed => 24,
        };
        h.checked_mul(k)
            .and_then(|m| u32::try_from(m).ok())
            .ok_or_else(|| Error::invalid(format!("class number {h} too large")))
    }
}

/// `sum a_sigma sigma`, indexed like the field's automorphism list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn is_admissible(&self, variant: Variant) -> bool {
        self.0.iter().all(|a| variant.exponent_values().contains(a))
    }

    /// `gcd` of the entries and `m`.
    pub fn content_with(&self, m: u32) -> u32 {
        self.0.iter().fold(m, |g, &a| g.gcd(&a))
    }

    /// The vector for `tau * epsilon`, i.e. `(tau eps)_{tau sigma} = eps_sigma`.
    pub fn translate(&self, tau: usize, table: &[Vec<usize>]) -> Self {
        let mut out = vec![0; self.0.len()];
        for (s, &a) in self.0.iter().enumerate() {
            out[table[tau][s]] = a;
        }
        ExponentVector(out)
    }

    /// Least translate under the Galois action; norm values depend only on this.
    pub fn orbit_representative(&self, table: &[Vec<usize>]) -> Self {
        (0..self.0.len())
            .map(|t| self.translate(t, table))
            .min()
            .expect("group is nonempty")
    }
}

/// `prod_sigma sigma(alpha)^{a_sigma}`.
pub fn alpha_power(k: &NumberField, alpha: &FieldElement, eps: &ExponentVector) -> Result<FieldElement> {
    if eps.0.len() != k.automorphism_count() {
        return Err(Error::invalid(format!(
            "exponent vector has {} entries, the field has {} automorphisms",
            eps.0.len(),
            k.automorphism_count()
        )));
    }
    let mut acc = k.one();
    for (s, &a) in eps.0.iter().enumerate() {
        if a > 0 {
            let conj = k.apply_automorphism(s, alpha)?;
            acc = k.mul(&acc, &k.pow(&conj, u64::from(a)));
        }
    }
    Ok(acc)
}

fn integer_norm(k: &NumberField, x: &FieldElement) -> Result<BigInt> {
    let n = k.norm(x);
    if !n.is_integer() {
        return Err(Error::invalid("norm of a non-integral element"));
    }
    Ok(n.to_integer())
}

/// `N_K(x^2 - t_m x + q^m)` with `x = alpha^epsilon`: the norm from `K(beta)` of
/// `alpha^epsilon - beta^m` when `beta` is not in `K`, the product of both conjugate
/// norms when it is.
pub fn norm_value(
    k: &NumberField,
    alpha: &FieldElement,
    eps: &ExponentVector,
    root: &FrobeniusRoot,
    m: u32,
) -> Result<BigInt> {
    let x = alpha_power(k, alpha, eps)?;
    let t = BigRational::from_integer(beta_power_trace(root, m));
    let qm = BigInt::from(root.q).pow(m);
    let y = k.mul(&x, &x).sub(&x.scale(&t)).add(&k.from_integer(&qm));
    integer_norm(k, &y)
}

static CYCLOTOMIC: std::sync::Mutex<BTreeMap<u32, IntPolynomial>> = std::sync::Mutex::new(BTreeMap::new());

/// `Phi_d` with integer coefficients.
pub fn cyclotomic(d: u32) -> IntPolynomial {
    if let Some(p) = CYCLOTOMIC.lock().expect("poisoned").get(&d) {
        return p.clone();
    }
    let mut coeffs = vec![BigInt::zero(); d as usize + 1];
    coeffs[0] = -BigInt::one();
    coeffs[d as usize] = BigInt::one();
    let mut p = IntPolynomial::new(coeffs);
    for e in 1..d {
        if d % e == 0 {
            p = p.exact_div(&cyclotomic(e)).expect("Phi_e divides x^d - 1");
        }
    }
    CYCLOTOMIC.lock().expect("poisoned").insert(d, p.clone());
    p
}

/// `beta` and `conj(beta)` as elements of `K`, when `K` contains `sqrt(a^2 - 4q)`.
pub fn beta_in_field(k: &NumberField, root: &FrobeniusRoot) -> Option<(FieldElement, FieldElement)> {
    let disc = root.discriminant();
    // disc = s^2 m0 with m0 squarefree
    let mut s: i128 = 1;
    let mut m0 = disc;
    let mut p: i128 = 2;
    while p * p <= m0.abs() {
        while m0 % (p * p) == 0 {
            m0 /= p * p;
            s *= p;
        }
        p += 1;
    }
    let (_, w) = k.quadratic_subfields().iter().find(|(m, _)| m.to_i128() == Some(m0))?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let minus_a = k.from_integer(&BigInt::from(-root.a));
    let sw = w.scale(&BigRational::from_integer(BigInt::from(s)));
    Some((minus_a.add(&sw).scale(&half), minus_a.sub(&sw).scale(&half)))
}

/// Integers whose product is a norm value, split along `X^g - Y^g = prod_{d | g} Phi_d(X, Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormPieces {
    /// `|N(Phi_d(X_0, Y_0))|` for each `d | g`, ascending in `d`.
    pub pieces: Vec<BigInt>,
    /// Sign of the full value.
    pub negative: bool,
}

impl NormPieces {
    pub fn is_zero(&self) -> bool {
        self.pieces.iter().any(|p| p.is_zero())
    }

    pub fn value(&self) -> BigInt {
        let v: BigInt = self.pieces.iter().product();
        if self.negative {
            -v
        } else {
            v
        }
    }
}

fn divisors(g: u32) -> Vec<u32> {
    (1..=g).filter(|d| g % d == 0).collect()
}

/// `sum_i c_i X^i Y^{D-i}` for `Phi_d = sum c_i x^i`, with `Y` given by its powers.
fn homogeneous_phi<T>(
    phi: &IntPolynomial,
    xpow: &[FieldElement],
    ypow: &[T],
    mut combine: impl FnMut(&BigInt, &FieldElement, &T),
) {
    let deg = phi.degree().expect("nonzero");
    for (i, c) in phi.coeffs().iter().enumerate() {
        if !c.is_zero() {
            combine(c, &xpow[i], &ypow[deg - i]);
        }
    }
}

/// Norm pieces of `alpha^epsilon - beta^m` over `K(beta)`, or of `x - beta^m` for the
/// given `beta` in `K` when `beta_k` is supplied.
pub fn norm_value_pieces(
    k: &NumberField,
    alpha: &FieldElement,
    eps: &ExponentVector,
    root: &FrobeniusRoot,
    m: u32,
    beta_k: Option<&FieldElement>,
) -> Result<NormPieces> {
    let g = eps.content_with(m);
    let reduced = ExponentVector(eps.0.iter().map(|a| a / g).collect());
    let x0 = alpha_power(k, alpha, &reduced)?;
    let mut xpow = vec![k.one()];
    for i in 1..=g as usize {
        xpow.push(k.mul(&xpow[i - 1], &x0));
    }
    let mut pieces = Vec::new();
    let mut negative = false;
    match beta_k {
        Some(beta) => {
            let y0 = k.pow(beta, u64::from(m / g));
            let mut ypow = vec![k.one()];
            for i in 1..=g as usize {
                ypow.push(k.mul(&ypow[i - 1], &y0));
            }
            for d in divisors(g) {
                let mut acc = k.zero();
                homogeneous_phi(&cyclotomic(d), &xpow, &ypow, |c, x, y| {
                    acc = acc.add(&k.mul(x, y).scale(&BigRational::from_integer(c.clone())));
                });
                let nm = integer_norm(k, &acc)?;
                negative ^= nm.is_negative();
                pieces.push(nm.abs());
            }
        }
        None => {
            // y^2 = t y - Q in K[y], y^i = u_i + v_i y
            let t = beta_power_trace(root, m / g);
            let qq = BigInt::from(root.q).pow(m / g);
            let mut ypow = vec![(BigInt::one(), BigInt::zero())];
            for i in 1..=g as usize {
                let (u, v) = &ypow[i - 1];
                ypow.push((-&qq * v, u + &t * v));
            }
            let tr = BigRational::from_integer(t.clone());
            let qr = BigRational::from_integer(qq.clone());
            for d in divisors(g) {
                let (mut a, mut b) = (k.zero(), k.zero());
                homogeneous_phi(&cyclotomic(d), &xpow, &ypow, |c, x, (u, v)| {
                    a = a.add(&x.scale(&BigRational::from_integer(c * u)));
                    b = b.add(&x.scale(&BigRational::from_integer(c * v)));
                });
                // (A + B y)(A + B y') = A^2 + t A B + Q B^2
                let ab = k.mul(&a, &b);
                let rel = k.mul(&a, &a).add(&ab.scale(&tr)).add(&k.mul(&b, &b).scale(&qr));
                let nm = integer_norm(k, &rel)?;
                negative ^= nm.is_negative();
                pieces.push(nm.abs());
            }
        }
    }
    Ok(NormPieces { pieces, negative })
}
