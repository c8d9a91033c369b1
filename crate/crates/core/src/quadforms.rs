//! Binary quadratic forms of negative discriminant, imaginary quadratic class numbers,
//! and the check that `K` contains no Hilbert class field of an imaginary quadratic field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::polyarith::is_squarefree;

/// The form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }

    /// The unique reduced form properly equivalent to a positive definite form.
    pub fn reduce(&self) -> Self {
        debug_assert!(self.is_positive_definite());
        let (mut a, mut b, mut c) = (self.a, self.b, self.c);
        loop {
            if b.abs() > a {
                // translate x -> x + k y to bring b into (-a, a]
                let two_a = 2 * a;
                let mut k = Integer::div_floor(&(a - b), &two_a);
                if b + k * two_a <= -a {
                    k += 1;
                }
                let nb = b + k * two_a;
                c = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
                b = nb;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if b.abs() > a {
                continue;
            }
            if b == -a || (a == c && b < 0) {
                b = -b;
            }
            return QuadraticForm { a, b, c };
        }
    }
}

/// Fundamental discriminant test for negative `d`.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let db = BigInt::from(d);
    match d.rem_euclid(4) {
        1 => is_squarefree(&db),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(&BigInt::from(m))
        }
        _ => false,
    }
}

/// Discriminant of `Q(sqrt m)` for squarefree `m != 0, 1`.
pub fn quadratic_field_discriminant(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

/// Reduced primitive forms of discriminant `d`, sorted by `(a, b)`.
pub fn reduced_forms(d: i64) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    let nd = -d;
    let mut a = 1i64;
    while 3 * a * a <= nd {
        for b in -a + 1..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadraticForm::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out
}

/// `h(D)` for a negative fundamental discriminant.
pub fn class_number_imag(d: i64) -> Result<u64> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::invalid(format!(
            "{d} is not a negative fundamental discriminant"
        )));
    }
    Ok(reduced_forms(d).len() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClearReason {
    /// `2h` does not divide `[K:Q]`, so no subfield of degree `2h` exists.
    DegreeMismatch,
    /// `[K:F] = h` but `K/F` ramifies above `p`.
    Ramified { p: u64, e_k: u32, e_f: u32 },
    /// `[K:F] = h` and `K/F` is unramified, but `Gal(K/F)` is not abelian.
    NonAbelian,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClearedSubfield {
    pub m: i64,
    pub disc: i64,
    pub class_number: u64,
    pub reason: ClearReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum HcfVerdict {
    NoImagQuadSubfieldHasHcfInK {
        cleared: Vec<ClearedSubfield>,
    },
    ContainsHcf {
        m: i64,
        disc: i64,
        class_number: u64,
        reason: String,
    },
    Undetermined {
        m: i64,
        disc: i64,
        class_number: u64,
        reason: String,
    },
}

impl HcfVerdict {
    pub fn is_clear(&self) -> bool {
        matches!(self, HcfVerdict::NoImagQuadSubfieldHasHcfInK { .. })
    }
}

/// Checks every imaginary quadratic subfield `F` of `K` for `H_F ⊆ K`.
pub fn hcf_containment_check(k: &NumberField) -> Result<HcfVerdict> {
    let n = k.degree() as u64;
    let mut cleared = Vec::new();
    for (m, witness) in k.quadratic_subfields() {
        if !m.is_negative() {
            continue;
        }
        let m = m
            .to_i64()
            .ok_or_else(|| Error::invalid(format!("subfield parameter {m} exceeds 64 bits")))?;
        let disc = quadratic_field_discriminant(m);
        let h = class_number_imag(disc)?;
        let clear = |reason| ClearedSubfield {
            m,
            disc,
            class_number: h,
            reason,
        };
        if h == 1 {
            return Ok(HcfVerdict::ContainsHcf {
                m,
                disc,
                class_number: h,
                reason: format!("Q(sqrt({m})) has class number 1 and is its own Hilbert class field"),
            });
        }
        if n % (2 * h) != 0 {
            cleared.push(clear(ClearReason::DegreeMismatch));
            continue;
        }
        if 2 * h < n {
            return Ok(HcfVerdict::Undetermined {
                m,
                disc,
                class_number: h,
                reason: format!(
                    "a degree {} subfield containing Q(sqrt({m})) may exist; intermediate fields are not enumerated",
                    2 * h
                ),
            });
        }
        // [K:F] = h: K is the Hilbert class field iff K/F is unramified and abelian
        let mut ramified_at = None;
        for p in k.ramified_primes()?.primes {
            let e_k = k
                .splitting_data(p)?
                .efg()
                .ok_or_else(|| Error::invalid(format!("splitting of {p} is not uniform; K is not Galois")))?
                .0;
            let e_f = if disc % p as i64 == 0 { 2 } else { 1 };
            if e_k > e_f {
                ramified_at = Some(ClearReason::Ramified { p, e_k, e_f });
                break;
            }
        }
        if let Some(reason) = ramified_at {
            cleared.push(clear(reason));
            continue;
        }
        let fixing = fixing_subgroup(k, witness)?;
        let table = k.composition_table();
        let abelian = fixing
            .iter()
            .all(|&s| fixing.iter().all(|&t| table[s][t] == table[t][s]));
        if abelian {
            return Ok(HcfVerdict::ContainsHcf {
                m,
                disc,
                class_number: h,
                reason: format!("K/Q(sqrt({m})) is unramified abelian of degree {h}"),
            });
        }
        cleared.push(clear(ClearReason::NonAbelian));
    }
    Ok(HcfVerdict::NoImagQuadSubfieldHasHcfInK { cleared })
}

/// Automorphisms fixing `w`.
fn fixing_subgroup(k: &NumberField, w: &crate::numfield::FieldElement) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for s in 0..k.automorphism_count() {
        if &k.apply_automorphism(s, w)? == w {
            out.push(s);
        }
    }
    Ok(out)
}
