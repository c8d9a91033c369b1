//! Subresultant resultants, discriminants, and Sturm real-root counting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::{IntPolynomial, RatPolynomial};

fn deg(p: &IntPolynomial) -> usize {
    p.degree().expect("nonzero")
}

/// Resultant over Z by the subresultant pseudo-remainder sequence.
pub fn poly_resultant(f: &IntPolynomial, g: &IntPolynomial) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (df, dg) = (deg(f), deg(g));
    if dg == 0 {
        return Ok(num_traits::pow(g.leading(), df));
    }
    if df == 0 {
        return Ok(num_traits::pow(f.leading(), dg));
    }
    let ca = f.content();
    let cb = g.content();
    let mut a = f.primitive_part_keep_sign(&ca);
    let mut b = g.primitive_part_keep_sign(&cb);
    let t = num_traits::pow(ca, dg) * num_traits::pow(cb, df);
    let mut s = BigInt::one();
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
        if deg(&a).is_odd() && deg(&b).is_odd() {
            s = -s;
        }
    }
    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (deg(&a), deg(&b));
        let delta = da - db;
        if da.is_odd() && db.is_odd() {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        let div = &gg * num_traits::pow(h.clone(), delta);
        b = IntPolynomial::new(r.coeffs().iter().map(|c| c / &div).collect());
        gg = a.leading();
        h = match delta {
            0 => h,
            _ => num_traits::pow(gg.clone(), delta) / num_traits::pow(h.clone(), delta - 1),
        };
        if deg(&b) == 0 {
            let da = deg(&a);
            let hh = num_traits::pow(b.leading(), da) / num_traits::pow(h, da - 1);
            return Ok(s * t * hh);
        }
    }
}

/// `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPolynomial) -> Result<BigInt> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::invalid("discriminant of a constant"));
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = poly_resultant(f, &f.derivative())? / f.leading();
    Ok(if (n * (n - 1) / 2).is_odd() { -r } else { r })
}

impl IntPolynomial {
    fn primitive_part_keep_sign(&self, content: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs().iter().map(|c| c / content).collect())
    }
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let nz: Vec<i8> = signs.filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sign_of(v: &num_rational::BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots of a squarefree polynomial, via a Sturm chain.
pub fn count_real_roots(f: &IntPolynomial) -> Result<usize> {
    let Some(n) = f.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if n == 0 {
        return Ok(0);
    }
    let fr = f.to_rational();
    let d = fr.derivative();
    if fr.gcd(&d).degree() != Some(0) {
        return Err(Error::NotSquarefree);
    }
    let mut chain: Vec<RatPolynomial> = vec![fr, d];
    loop {
        let k = chain.len();
        let r = chain[k - 2].div_rem(&chain[k - 1]).1;
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    let at_pos = sign_changes(chain.iter().map(|p| sign_of(&p.leading())));
    let at_neg = sign_changes(chain.iter().map(|p| {
        let s = sign_of(&p.leading());
        if p.degree().unwrap_or(0).is_odd() {
            -s
        } else {
            s
        }
    }));
    Ok(at_neg - at_pos)
}
