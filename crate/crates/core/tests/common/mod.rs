//! Ball-arithmetic evaluation of norm values through complex embeddings, independent of the
//! exact number-field code.

#![allow(dead_code)]

use dashu_float::round::mode::HalfEven;
use dashu_float::{Ball, Context, FBig};
use dashu_int::IBig;
use num_bigint::BigInt;

/// Working precision in bits; norm values in the tests stay below 2^400.
pub const PREC: usize = 1024;

type R = Ball<2>;

fn exact(v: &BigInt) -> R {
    let i: IBig = v.to_string().parse().expect("decimal");
    Ball::exact(FBig::<HalfEven, 2>::from(i).into_repr())
}

fn small(v: i64) -> R {
    exact(&BigInt::from(v))
}

#[derive(Clone)]
struct C {
    re: R,
    im: R,
}

impl C {
    fn real(r: R) -> Self {
        C { re: r, im: small(0) }
    }

    fn add(&self, o: &C) -> C {
        C {
            re: self.re.add(&o.re, PREC).unwrap(),
            im: self.im.add(&o.im, PREC).unwrap(),
        }
    }

    fn sub(&self, o: &C) -> C {
        C {
            re: self.re.sub(&o.re, PREC).unwrap(),
            im: self.im.sub(&o.im, PREC).unwrap(),
        }
    }

    fn mul(&self, o: &C) -> C {
        let rr = self.re.mul(&o.re, PREC).unwrap();
        let ii = self.im.mul(&o.im, PREC).unwrap();
        let ri = self.re.mul(&o.im, PREC).unwrap();
        let ir = self.im.mul(&o.re, PREC).unwrap();
        C {
            re: rr.sub(&ii, PREC).unwrap(),
            im: ri.add(&ir, PREC).unwrap(),
        }
    }

    fn pow(&self, k: u32) -> C {
        let mut acc = C::real(small(1));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn abs2(&self) -> R {
        self.re
            .sqr(PREC)
            .unwrap()
            .add(&self.im.sqr(PREC).unwrap(), PREC)
            .unwrap()
    }
}

/// A ball enclosure rounded to the nearest integer, with its radius.
#[derive(Debug, Clone)]
pub struct Enclosure {
    pub rounded: BigInt,
    pub radius: f64,
}

impl Enclosure {
    fn new(b: &R) -> Self {
        let (mid, rad) = b.to_value_radius(&Context::<HalfEven>::new(PREC));
        let rounded: BigInt = mid.round().to_int().value().to_string().parse().unwrap();
        Enclosure {
            rounded,
            radius: rad.to_f64().value(),
        }
    }

    /// Agreement after rounding with a rigorous radius below 1/2.
    pub fn agrees_with(&self, v: &BigInt) -> bool {
        self.radius < 0.5 && &self.rounded == v
    }
}

fn beta(a: i64, q: u64) -> C {
    let half = Ball::exact(FBig::<HalfEven, 2>::from_parts(IBig::ONE, -1).into_repr());
    let disc = small(4 * q as i64 - a * a);
    C {
        re: small(-a).mul(&half, PREC).unwrap(),
        im: disc.sqrt(PREC).unwrap().mul(&half, PREC).unwrap(),
    }
}

/// `beta^m + conj(beta)^m` for `beta` a root of `x^2 + a x + q`.
pub fn trace_enclosure(a: i64, q: u64, m: u32) -> Enclosure {
    let b = beta(a, q).pow(m);
    Enclosure::new(&b.re.add(&b.re, PREC).unwrap())
}

fn quadratic_value(z: &C, a: i64, q: u64, m: u32) -> C {
    let t = {
        let b = beta(a, q).pow(m);
        b.re.add(&b.re, PREC).unwrap()
    };
    let qm = exact(&BigInt::from(q).pow(m));
    z.mul(z).sub(&z.mul(&C::real(t))).add(&C::real(qm))
}

/// `alpha^e^2 - t_m alpha^e + q^m` over `Q`.
pub fn rational_norm_value(alpha: i64, e: u32, a: i64, q: u64, m: u32) -> Enclosure {
    let z = C::real(small(alpha)).pow(e);
    Enclosure::new(&quadratic_value(&z, a, q, m).re)
}

/// The norm value over `Q(sqrt(-n))` with basis `1, theta`, `theta^2 = -n`, identity at
/// automorphism index 0 and conjugation at index 1, for `alpha = c0 + c1 theta`.
pub fn imag_quadratic_norm_value(n: i64, alpha: (i64, i64), eps: [u32; 2], a: i64, q: u64, m: u32) -> Enclosure {
    let root_n = small(n).sqrt(PREC).unwrap();
    let coeff = |s: i64| C {
        re: small(alpha.0),
        im: small(s * alpha.1).mul(&root_n, PREC).unwrap(),
    };
    let z = coeff(1).pow(eps[0]).mul(&coeff(-1).pow(eps[1]));
    Enclosure::new(&quadratic_value(&z, a, q, m).abs2())
}

pub mod suites;

/// The published certificate schema, compiled as draft 2020-12.
pub fn certificate_schema() -> jsonschema::JSONSchema {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/certificate.schema.json");
    let text = std::fs::read_to_string(path).expect("schema file");
    let schema: serde_json::Value = serde_json::from_str(&text).expect("schema JSON");
    jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&schema)
        .expect("valid schema")
}

/// Schema errors of a certificate, as strings.
pub fn schema_errors(schema: &jsonschema::JSONSchema, cert: &serde_json::Value) -> Vec<String> {
    match schema.validate(cert) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{}: {e}", e.instance_path)).collect(),
    }
}
