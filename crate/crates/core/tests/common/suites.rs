//! Checks shared by the integration tests and the acceptance harness. Each returns a short
//! summary on success and the first discrepancy on failure.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use qmcert::boundsets::{
    build_exceptional_sets, frobenius_roots, norm_value, norm_value_pieces, ClassData, Enumeration, EnumerationOptions,
    ExceptionalSets, ExponentVector, Variant,
};
use qmcert::certify::{certify, CertifyOptions};
use qmcert::numfield::{bundled, ClassGeneratorSpec, FieldElement, IntegralIdeal, NumberField};
use qmcert::polyarith::{jacobi_symbol, primes_up_to};
use qmcert::quadforms::{class_number_imag, is_fundamental_discriminant};
use qmcert::quaternion::{hilbert_symbol_int, Place};

use super::{imag_quadratic_norm_value, rational_norm_value, trace_enclosure};

pub type Outcome = Result<String, String>;

pub const BUNDLED: &[&str] = &[
    "rationals",
    "q_i",
    "q_sqrt2",
    "q_sqrt_m5",
    "q_sqrt3_sqrt_m5",
    "q_zeta5",
    "q_zeta17",
];

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn field(key: &str) -> NumberField {
    bundled::field(key).unwrap_or_else(|e| panic!("{key}: {e}"))
}

/// Prime divisors by trial division.
fn prime_divisors(n: i64) -> Vec<u64> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Removes even powers of `p`, leaving valuation 0 or 1.
fn normalize(mut a: i64, p: i64) -> i64 {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    a
}

/// `(a, b)_p` from a primitive solution of `z^2 = a x^2 + b y^2` modulo `p^k`.
pub fn brute_force_symbol(a: i64, b: i64, p: i64) -> i8 {
    let k = if p == 2 { 6 } else { 3 };
    let (a, b) = (normalize(a, p), normalize(b, p));
    let m = p.pow(k);
    let mut square = vec![false; m as usize];
    for z in 0..m {
        square[(z * z % m) as usize] = true;
    }
    let r = |v: i64| v.rem_euclid(m) as usize;
    for t in 0..m {
        let t2 = t * t % m;
        if square[r(a + b * t2)] || square[r(a * t2 + b)] {
            return 1;
        }
    }
    -1
}

pub fn hilbert_brute_force(limit: u64) -> Outcome {
    let mut n = 0;
    for p in primes_up_to(limit) {
        for a in -30i64..=30 {
            for b in a..=30 {
                if a == 0 || b == 0 {
                    continue;
                }
                let got = hilbert_symbol_int(&a.into(), &b.into(), Place::Finite(p)).map_err(|e| e.to_string())?;
                if got != brute_force_symbol(a, b, p as i64) {
                    return Err(format!("({a}, {b})_{p} = {got}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} symbols for p <= {limit}"))
}

pub fn hilbert_product_formula(cases: u32) -> Outcome {
    let range = -1_000_000i64..=1_000_000;
    runner(cases)
        .run(&(range.clone(), range), |(a, b)| {
            prop_assume!(a != 0 && b != 0);
            let mut places = vec![Place::Infinite];
            let mut primes: BTreeSet<u64> = prime_divisors(a).into_iter().collect();
            primes.extend(prime_divisors(b));
            primes.insert(2);
            places.extend(primes.into_iter().map(Place::Finite));
            let mut product = 1i8;
            for v in places {
                product *= hilbert_symbol_int(&a.into(), &b.into(), v).unwrap();
            }
            prop_assert_eq!(product, 1, "({}, {})", a, b);
            Ok(())
        })
        .map(|_| format!("{cases} pairs"))
        .map_err(|e| e.to_string())
}

pub fn jacobi_vs_squares(limit: u64) -> Outcome {
    let mut n = 0;
    for p in primes_up_to(limit).into_iter().filter(|&p| p > 2) {
        let squares: BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
        for a in 0..p {
            let want = if a == 0 {
                0
            } else if squares.contains(&a) {
                1
            } else {
                -1
            };
            let got = jacobi_symbol(&BigInt::from(a), &BigInt::from(p)).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("({a} / {p}) = {got}, expected {want}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} symbols for odd p <= {limit}"))
}

fn element(coords: &[i64]) -> FieldElement {
    FieldElement::from_i64s(coords)
}

pub fn norm_multiplicativity(key: &str, cases: u32) -> Outcome {
    let k = field(key);
    let n = k.degree();
    let coords = proptest::collection::vec(-20i64..=20, n);
    runner(cases)
        .run(&(coords.clone(), coords), |(x, y)| {
            let (x, y) = (element(&x), element(&y));
            prop_assert_eq!(k.norm(&k.mul(&x, &y)), k.norm(&x) * k.norm(&y));
            Ok(())
        })
        .map(|_| format!("{key}: {cases} pairs"))
        .map_err(|e| format!("{key}: {e}"))
}

pub fn ideal_norm_multiplicativity(key: &str, cases: u32) -> Outcome {
    let k = field(key);
    let n = k.degree();
    let coords = proptest::collection::vec(-9i64..=9, n);
    let ideal = (coords.clone(), coords).prop_filter("nonzero", |(x, y)| x.iter().chain(y).any(|&c| c != 0));
    runner(cases)
        .run(&(ideal.clone(), ideal), |((a1, a2), (b1, b2))| {
            let a = IntegralIdeal::from_generators(&k, &[element(&a1), element(&a2)]).unwrap();
            let b = IntegralIdeal::from_generators(&k, &[element(&b1), element(&b2)]).unwrap();
            prop_assert_eq!(k.ideal_multiply(&a, &b).norm(), a.norm() * b.norm());
            Ok(())
        })
        .map(|_| format!("{key}: {cases} pairs"))
        .map_err(|e| format!("{key}: {e}"))
}

pub fn local_degree_sums(limit: u64) -> Outcome {
    let mut n = 0;
    for &key in BUNDLED {
        let k = field(key);
        for p in primes_up_to(limit) {
            let sd = k.splitting_data(p).map_err(|e| format!("{key}, p = {p}: {e}"))?;
            if sd.degree_sum() as usize != k.degree() {
                return Err(format!("{key}, p = {p}: sum e f = {}", sd.degree_sum()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} (field, p) pairs"))
}

/// `(D / n)` from Euler's criterion at each prime factor of `n`.
fn kronecker(d: i64, n: i64) -> i64 {
    let mut out = 1;
    for p in prime_divisors(n) {
        let mut e = 0;
        let mut m = n;
        while m % p as i64 == 0 {
            m /= p as i64;
            e += 1;
        }
        let s: i64 = if p == 2 {
            match d.rem_euclid(8) {
                1 | 7 => 1,
                3 | 5 => -1,
                _ => 0,
            }
        } else {
            let r = BigInt::from(d)
                .mod_floor(&BigInt::from(p))
                .modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
            if r.is_zero() {
                0
            } else if r.is_one() {
                1
            } else {
                -1
            }
        };
        out *= s.pow(e);
    }
    out
}

/// `h = -(w / 2|D|) sum_{a < |D|} chi(a) a`.
fn analytic_class_number(d: i64) -> u64 {
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let s: i64 = (1..-d).map(|a| kronecker(d, a) * a).sum();
    (-w * s / (-2 * d)) as u64
}

pub fn class_numbers(limit: i64) -> Outcome {
    let mut ones = Vec::new();
    let mut n = 0;
    for d in (-limit..0).rev().filter(|&d| is_fundamental_discriminant(d)) {
        let h = class_number_imag(d).map_err(|e| e.to_string())?;
        let oracle = analytic_class_number(d);
        if h != oracle {
            return Err(format!("h({d}) = {h}, analytic formula gives {oracle}"));
        }
        if h == 1 {
            ones.push(d);
        }
        n += 1;
    }
    if ones != [-3, -4, -7, -8, -11, -19, -43, -67, -163] {
        return Err(format!("class number one: {ones:?}"));
    }
    Ok(format!("{n} fundamental discriminants, 9 with h = 1"))
}

pub fn weil_bounds(q_limit: u64, m_limit: u32) -> Outcome {
    let mut n = 0;
    for q in primes_up_to(10_000) {
        let count = frobenius_roots(q).map_err(|e| e.to_string())?.len() as u64;
        let want = 2 * (4 * q).sqrt_floor() + 1;
        if count != want {
            return Err(format!("{count} roots for q = {q}, expected {want}"));
        }
    }
    for q in primes_up_to(q_limit) {
        for root in frobenius_roots(q).map_err(|e| e.to_string())? {
            for m in 1..=m_limit {
                let t = qmcert::boundsets::beta_power_trace(&root, m);
                if &t * &t > BigInt::from(4) * BigInt::from(q).pow(m) {
                    return Err(format!("|t_{m}| > 2 q^(m/2) for (a, q) = ({}, {q})", root.a));
                }
                let enc = trace_enclosure(root.a, q, m);
                if !enc.agrees_with(&t) {
                    return Err(format!("t_{m}({}, {q}) = {t}, enclosure {enc:?}", root.a));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} traces; root counts for q <= 10^4"))
}

trait SqrtFloor {
    fn sqrt_floor(self) -> Self;
}

impl SqrtFloor for u64 {
    fn sqrt_floor(self) -> u64 {
        num_integer::Roots::sqrt(&self)
    }
}

/// Every nonzero value factors over `n0`, and every prime of `n0` divides one of them.
fn n0_matches_values(n0: &[BigInt], values: &[BigInt]) -> Result<(), String> {
    for v in values {
        let mut r = v.abs();
        for p in n0 {
            while (&r % p).is_zero() {
                r /= p;
            }
        }
        if !r.is_one() {
            return Err(format!("value {v} has a prime factor outside N_0 (cofactor {r})"));
        }
    }
    for p in n0 {
        if !values.iter().any(|v| (v % p).is_zero()) {
            return Err(format!("{p} divides no nonzero norm value"));
        }
    }
    Ok(())
}

fn tuples(n: usize, values: [u32; 5]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e| {
                values.iter().map(move |&v| {
                    let mut e = e.clone();
                    e.push(v);
                    e
                })
            })
            .collect();
    }
    out
}

fn ints(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Builds the sets for both variants with 1 and 8 threads and twice with the default pool,
/// and requires all runs to agree.
fn deterministic_sets(k: &NumberField, cd: &ClassData, variant: Variant) -> Result<ExceptionalSets, String> {
    let run = |threads| {
        let opts = EnumerationOptions {
            threads,
            ..Default::default()
        };
        match build_exceptional_sets(k, cd, variant, &opts).map_err(|e| e.to_string())? {
            Enumeration::Complete(s) => Ok(s),
            Enumeration::Infeasible(r) => Err(r.to_string()),
        }
    };
    let first = run(Some(1))?;
    for threads in [Some(8), None, None] {
        if run(threads)? != first {
            return Err(format!("{variant:?} sets differ with threads = {threads:?}"));
        }
    }
    Ok(first)
}

struct DeskCase {
    key: &'static str,
    t: Vec<u64>,
    ram: Vec<u64>,
    /// Ball enclosure of the norm value for `(epsilon, a, q, m)`.
    oracle: fn(&[u32], i64, u64, u32) -> super::Enclosure,
}

fn desk_case(case: &DeskCase) -> Outcome {
    let k = field(case.key);
    let cd = ClassData::from_field(&k).map_err(|e| e.to_string())?;
    let g = &cd.generators[0];
    let mut summary = Vec::new();
    for variant in [Variant::Primed, Variant::Unprimed] {
        let sets = deterministic_sets(&k, &cd, variant)?;
        if !sets.complete_factorization() || !sets.is_exhaustive() {
            return Err(format!("{variant:?} sets are incomplete"));
        }
        let m = variant.beta_exponent(cd.h).map_err(|e| e.to_string())?;
        let mut values = Vec::new();
        let mut zeros = 0;
        let mut checked = 0;
        for eps in tuples(k.automorphism_count(), variant.exponent_values()) {
            let ev = ExponentVector(eps.clone());
            for root in frobenius_roots(g.q).map_err(|e| e.to_string())? {
                let exact = norm_value(&k, &g.alpha, &ev, &root, m).map_err(|e| e.to_string())?;
                let enc = (case.oracle)(&eps, root.a, root.q, m);
                if !enc.agrees_with(&exact) {
                    return Err(format!("{eps:?}, a = {}: exact {exact}, enclosure {enc:?}", root.a));
                }
                let pieces = norm_value_pieces(&k, &g.alpha, &ev, &root, m, None).map_err(|e| e.to_string())?;
                if pieces.value() != exact {
                    return Err(format!(
                        "{eps:?}, a = {}: split value {} differs",
                        root.a,
                        pieces.value()
                    ));
                }
                checked += 1;
                if exact.is_zero() {
                    zeros += 1;
                } else {
                    values.push(exact);
                }
            }
        }
        n0_matches_values(&sets.n0, &values).map_err(|e| format!("{variant:?}: {e}"))?;
        if (zeros > 0) != (sets.stats.zero_values > 0) {
            return Err(format!(
                "{variant:?}: {zeros} zero values, enumeration saw {}",
                sets.stats.zero_values
            ));
        }
        if let Some(p) = sets
            .provenance
            .iter()
            .find(|p| p.witness.as_ref().is_some_and(|w| w.value.is_zero()))
        {
            return Err(format!("{} witnessed by a zero value", p.prime));
        }
        if sets.t != case.t || sets.ram != case.ram {
            return Err(format!("{variant:?}: T = {:?}, Ram = {:?}", sets.t, sets.ram));
        }
        let union: BTreeSet<BigInt> = sets
            .n0
            .iter()
            .cloned()
            .chain(ints(&case.t))
            .chain(ints(&case.ram))
            .collect();
        if sets.n1 != union.into_iter().collect::<Vec<_>>() {
            return Err(format!("{variant:?}: N_1 is not N_0 + T + Ram"));
        }
        summary.push(format!(
            "{variant:?} |N_1| = {}, {checked} values cross-checked, {zeros} zero",
            sets.n1.len()
        ));
    }
    Ok(format!("{}: {}", case.key, summary.join("; ")))
}

pub fn desk_rationals() -> Outcome {
    desk_case(&DeskCase {
        key: "rationals",
        t: vec![2, 3, 5],
        ram: vec![],
        oracle: |eps, a, q, m| rational_norm_value(5, eps[0], a, q, m),
    })
}

pub fn desk_sqrt_m5() -> Outcome {
    desk_case(&DeskCase {
        key: "q_sqrt_m5",
        t: vec![2, 3, 7],
        ram: vec![2, 5],
        oracle: |eps, a, q, m| imag_quadratic_norm_value(5, (2, 3), [eps[0], eps[1]], a, q, m),
    })
}

/// Byte-identical certificates across thread counts and repeated runs.
pub fn certificate_determinism(d: u64, key: &str) -> Outcome {
    let source = bundled::source(key).map_err(|e| e.to_string())?;
    let run = |threads| {
        let opts = CertifyOptions {
            gamma0: true,
            threads,
            ..Default::default()
        };
        certify(d, source, &opts)
            .and_then(|c| c.to_json())
            .map_err(|e| e.to_string())
    };
    let first = run(Some(1))?;
    for threads in [Some(8), Some(1)] {
        if run(threads)? != first {
            return Err(format!("certificate differs with threads = {threads:?}"));
        }
    }
    Ok(format!("d = {d}, {key}: {} bytes, identical over 3 runs", first.len()))
}

/// `alpha^(e1 + e2) = alpha^e1 alpha^e2` and `N(alpha^e) = prod N(alpha)^(a_sigma)`.
pub fn alpha_power_norms(key: &str, cases: u32) -> Outcome {
    let k = field(key);
    let n = k.degree();
    let g = k.automorphism_count();
    let exps = proptest::collection::vec(0u32..=6, g);
    let coords = proptest::collection::vec(-6i64..=6, n).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0));
    runner(cases)
        .run(&(coords, exps.clone(), exps), |(c, e1, e2)| {
            let alpha = element(&c);
            let sum = ExponentVector(e1.iter().zip(&e2).map(|(a, b)| a + b).collect());
            let (e1, e2) = (ExponentVector(e1), ExponentVector(e2));
            let p1 = qmcert::boundsets::alpha_power(&k, &alpha, &e1).unwrap();
            let p2 = qmcert::boundsets::alpha_power(&k, &alpha, &e2).unwrap();
            let ps = qmcert::boundsets::alpha_power(&k, &alpha, &sum).unwrap();
            prop_assert_eq!(&ps, &k.mul(&p1, &p2));
            let total: u32 = sum.0.iter().sum();
            prop_assert_eq!(k.norm(&ps), num_traits::pow(k.norm(&alpha), total as usize));
            Ok(())
        })
        .map(|_| format!("{key}: {cases} cases"))
        .map_err(|e| format!("{key}: {e}"))
}

/// `N_1` for the stored `S` and for `S` plus a generator above `q`.
pub fn n1_monotone(key: &str, q: u64) -> Outcome {
    let k = field(key);
    let small = ClassData::from_field(&k).map_err(|e| e.to_string())?;
    let mut specs = k.spec().class_generators.clone();
    specs.push(find_generator_spec(&k, q).ok_or(format!("no generator found above {q}"))?);
    let large = ClassData::verify(&k, &specs).map_err(|e| e.to_string())?;
    compare_n1(&k, &small, &large).map(|s| format!("{key}: {s}"))
}

/// A generator of `(q, theta - r)^h` with coordinates in `[-40, 40]`, degree at most 2.
fn find_generator_spec(k: &NumberField, q: u64) -> Option<ClassGeneratorSpec> {
    let h = k.class_number() as u32;
    let target = num_rational::BigRational::from_integer(BigInt::from(q).pow(h));
    let range: Vec<i64> = (-40..=40).collect();
    let candidates: Vec<Vec<i64>> = match k.degree() {
        1 => range.iter().map(|&x| vec![x]).collect(),
        _ => range
            .iter()
            .flat_map(|&x| range.iter().map(move |&y| vec![x, y]))
            .collect(),
    };
    for r in k.roots_mod(q) {
        for c in &candidates {
            if k.norm(&element(c)).abs() != target {
                continue;
            }
            let spec = ClassGeneratorSpec {
                q,
                root: r,
                alpha: c.iter().map(|&x| BigInt::from(x).into()).collect(),
            };
            if ClassData::verify(k, std::slice::from_ref(&spec)).is_ok() {
                return Some(spec);
            }
        }
    }
    None
}

fn compare_n1(k: &NumberField, small: &ClassData, large: &ClassData) -> Outcome {
    let opts = EnumerationOptions::default();
    let build = |cd: &ClassData| -> Result<ExceptionalSets, String> {
        build_exceptional_sets(k, cd, Variant::Primed, &opts)
            .map_err(|e| e.to_string())?
            .complete()
            .ok_or("refused".to_string())
    };
    let (a, b) = (build(small)?, build(large)?);
    let missing: Vec<&BigInt> = a.n1.iter().filter(|p| !b.contains(p)).collect();
    if !missing.is_empty() {
        return Err(format!("enlarging S removed {missing:?}"));
    }
    Ok(format!(
        "|S| {} -> {}: |N_1| {} -> {}",
        small.generators.len(),
        large.generators.len(),
        a.n1.len(),
        b.n1.len()
    ))
}

pub fn zeta17() -> Result<(NumberField, ClassData), String> {
    let k = field("q_zeta17");
    let cd = ClassData::from_field(&k).map_err(|e| e.to_string())?;
    Ok((k, cd))
}

/// The full enumeration over `Q(zeta_17)` must be refused with the budget arithmetic.
pub fn zeta17_refusal(k: &NumberField, cd: &ClassData) -> Outcome {
    match build_exceptional_sets(k, cd, Variant::Primed, &EnumerationOptions::default()).map_err(|e| e.to_string())? {
        Enumeration::Infeasible(r) if r.tuples == BigInt::from(5u64).pow(16) && r.to_string().contains("5^16") => {
            Ok(r.to_string())
        }
        Enumeration::Infeasible(r) => Err(format!("wrong budget report: {r}")),
        Enumeration::Complete(_) => Err("enumeration was not refused".into()),
    }
}

/// Enumeration restricted to the identity and one other automorphism.
pub fn zeta17_bounded_subset(k: &NumberField, cd: &ClassData) -> Outcome {
    let opts = EnumerationOptions {
        support: Some(vec![k.identity_index()]),
        factor: qmcert::polyarith::FactorOptions {
            wide_rho_iterations: 2_000,
            ..Default::default()
        },
        ..Default::default()
    };
    match build_exceptional_sets(k, cd, Variant::Primed, &opts).map_err(|e| e.to_string())? {
        Enumeration::Complete(s) if !s.is_exhaustive() && s.stats.exponent_tuples == 5 => Ok(format!(
            "support {:?}: {} tuples, |N_1| = {}, {} unfactored",
            s.support,
            s.stats.exponent_tuples,
            s.n1.len(),
            s.unfactored.len()
        )),
        Enumeration::Complete(s) => Err(format!("unexpected restricted run: {:?}", s.stats)),
        Enumeration::Infeasible(r) => Err(r.to_string()),
    }
}
