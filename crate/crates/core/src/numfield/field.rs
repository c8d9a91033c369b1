//! Verified number fields: ring structure, automorphism group, discriminant, maximality.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::element::FieldElement;
use super::spec::NumberFieldSpec;
use super::splitting::SplittingData;
use crate::error::{Error, Result};
use crate::polyarith::{
    count_real_roots, dedekind_p_maximal, discriminant, factor_mod_p, factorize, is_squarefree, kernel_mod_p,
    next_prime, rank_mod_p, FactorOptions, Matrix, ModPoly,
};
use crate::{IntMatrix, IntPolynomial, RatMatrix, RatPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Taken on trust from the input file.
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Outcome of every check run on a field specification, in order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    fn push(&mut self, name: impl Into<String>, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, CheckStatus::Pass, detail);
    }

    fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, CheckStatus::Fail, detail);
    }

    fn assume(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, CheckStatus::Assumed, detail);
    }

    pub fn all_passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.status == CheckStatus::Fail)
    }

    pub fn assumptions(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Assumed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// A number field whose specification passed every check.
#[derive(Debug, Clone)]
pub struct NumberField {
    spec: NumberFieldSpec,
    n: usize,
    f: IntPolynomial,
    f_rat: RatPolynomial,
    /// Basis elements as polynomials in theta.
    basis: Vec<RatPolynomial>,
    /// Power-basis row vector times this matrix gives integral-basis coordinates.
    to_basis: RatMatrix,
    /// `mult[i][j]` = coordinates of `w_i * w_j`.
    mult: Vec<Vec<Vec<BigInt>>>,
    traces: Vec<BigInt>,
    poly_disc: BigInt,
    disc: BigInt,
    index: BigInt,
    automorphisms: Vec<RatPolynomial>,
    identity: usize,
    composition: Vec<Vec<usize>>,
    /// `aut_cols[s][j]` = coordinates of `s(w_j)`.
    aut_cols: Vec<Vec<Vec<BigInt>>>,
    quadratic_subfields: Vec<(BigInt, FieldElement)>,
    factorizations: BTreeMap<u64, SplittingData>,
    report: VerificationReport,
}

/// Runs every check on `spec` and reports each outcome.
pub fn verify_field_spec(spec: &NumberFieldSpec) -> VerificationReport {
    build(spec).0
}

impl NumberField {
    /// Verifies `spec`; fails with the first violated check.
    pub fn new(spec: NumberFieldSpec) -> Result<Self> {
        let (report, field) = build(&spec);
        if let Some(c) = report.first_failure() {
            return Err(Error::verification(&c.name, c.detail.clone()));
        }
        field.ok_or_else(|| Error::Internal("field construction stopped without a failed check".into()))
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        Self::new(NumberFieldSpec::from_toml_str(s)?)
    }

    pub fn spec(&self) -> &NumberFieldSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn defining_poly(&self) -> &IntPolynomial {
        &self.f
    }

    /// Discriminant of the defining polynomial.
    pub fn poly_disc(&self) -> &BigInt {
        &self.poly_disc
    }

    /// Discriminant of the verified integral basis.
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// `[O : Z[theta]]`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn class_number(&self) -> u64 {
        self.spec.class_number
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    /// True if some part of basis maximality rests on the input flag.
    pub fn maximality_assumed(&self) -> bool {
        self.report.assumptions().any(|c| c.name.starts_with("maximality"))
    }

    pub fn automorphism_count(&self) -> usize {
        self.automorphisms.len()
    }

    pub fn automorphism_images(&self) -> &[RatPolynomial] {
        &self.automorphisms
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    /// `table[s][t]` = index of `s o t`.
    pub fn composition_table(&self) -> &[Vec<usize>] {
        &self.composition
    }

    pub fn quadratic_subfields(&self) -> &[(BigInt, FieldElement)] {
        &self.quadratic_subfields
    }

    pub(crate) fn stored_factorization(&self, p: u64) -> Option<&SplittingData> {
        self.factorizations.get(&p)
    }

    pub fn real_places(&self) -> Result<usize> {
        count_real_roots(&self.f)
    }

    pub fn one(&self) -> FieldElement {
        self.from_power_poly(&RatPolynomial::one())
    }

    pub fn theta(&self) -> FieldElement {
        self.from_power_poly(&RatPolynomial::x())
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.n)
    }

    pub fn from_integer(&self, c: &BigInt) -> FieldElement {
        self.one().scale(&BigRational::from_integer(c.clone()))
    }

    /// Element given by a polynomial in theta.
    pub fn from_power_poly(&self, p: &RatPolynomial) -> FieldElement {
        let r = p.rem_monic(&self.f_rat);
        let row: Vec<BigRational> = (0..self.n).map(|i| r.coeff(i)).collect();
        FieldElement::new(row_times(&row, &self.to_basis))
    }

    pub fn to_power_poly(&self, x: &FieldElement) -> RatPolynomial {
        x.coords()
            .iter()
            .zip(&self.basis)
            .fold(RatPolynomial::zero(), |acc, (c, w)| &acc + &w.scale(c))
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let n = self.n;
        let mut out = vec![BigRational::zero(); n];
        for (i, xi) in x.coords().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * BigRational::from_integer(m.clone());
                    }
                }
            }
        }
        FieldElement::new(out)
    }

    /// Product of integral elements in integer coordinates.
    pub(crate) fn mul_int(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &FieldElement, mut k: u64) -> FieldElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Matrix of multiplication by an integral element: column `j` is `y * w_j`.
    pub(crate) fn mul_matrix_int(&self, y: &[BigInt]) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.n)
            .map(|j| {
                let mut e = vec![BigInt::zero(); self.n];
                e[j] = BigInt::one();
                self.mul_int(y, &e)
            })
            .collect();
        Matrix::from_cols(self.n, &cols)
    }

    /// `N_{K/Q}(x)` as the determinant of multiplication by `x`.
    pub fn norm(&self, x: &FieldElement) -> BigRational {
        let (y, den) = x.split_denominator();
        let det = self.mul_matrix_int(&y).determinant();
        BigRational::new(det, num_traits::pow(den, self.n))
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        x.coords()
            .iter()
            .zip(&self.traces)
            .fold(BigRational::zero(), |acc, (c, t)| {
                acc + c * BigRational::from_integer(t.clone())
            })
    }

    pub fn apply_automorphism(&self, sigma: usize, x: &FieldElement) -> Result<FieldElement> {
        let cols = self
            .aut_cols
            .get(sigma)
            .ok_or_else(|| Error::invalid(format!("automorphism index {sigma} out of range (have {})", self.n)))?;
        let mut out = vec![BigRational::zero(); self.n];
        for (j, xj) in x.coords().iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, c) in cols[j].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += xj * BigRational::from_integer(c.clone());
                }
            }
        }
        Ok(FieldElement::new(out))
    }

    /// Tests whether the order spanned by the basis is maximal at `p` by comparing it
    /// with the multiplier ring of its `p`-radical.
    pub fn order_is_p_maximal(&self, p: u64) -> Result<bool> {
        order_is_p_maximal(&self.mult, self.n, p)
    }
}

fn row_times(row: &[BigRational], m: &RatMatrix) -> Vec<BigRational> {
    (0..m.cols())
        .map(|j| {
            row.iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (i, r)| acc + r * m.get(i, j))
        })
        .collect()
}

fn integer_vec(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

fn reduce_u64(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue")
}

/// Pohst-Zassenhaus test on the order with structure constants `mult`.
fn order_is_p_maximal(mult: &[Vec<Vec<BigInt>>], n: usize, p: u64) -> Result<bool> {
    let mulp = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut out = vec![0u128; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let c = (x[i] as u128 * y[j] as u128) % p as u128;
                for k in 0..n {
                    let m = reduce_u64(&mult[i][j][k], p) as u128;
                    out[k] = (out[k] + c * m) % p as u128;
                }
            }
        }
        out.into_iter().map(|v| v as u64).collect()
    };
    let mut q = BigUint::from(p);
    while q < BigUint::from(n) {
        q *= p;
    }
    let one_hot = |i: usize| -> Vec<u64> {
        let mut e = vec![0u64; n];
        e[i] = 1;
        e
    };
    // Frobenius-power map x -> x^q on O/pO; its kernel is the p-radical mod p.
    let mut frob_cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc: Option<Vec<u64>> = None;
        let mut base = one_hot(i);
        let bits = q.bits();
        for b in 0..bits {
            if q.bit(b) {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => mulp(&a, &base),
                });
            }
            if b + 1 < bits {
                base = mulp(&base, &base);
            }
        }
        frob_cols.push(acc.expect("q >= 1"));
    }
    let frob_rows: Vec<Vec<u64>> = (0..n).map(|k| frob_cols.iter().map(|c| c[k]).collect()).collect();
    let radical = kernel_mod_p(&frob_rows, n, p);
    let pb = BigInt::from(p);
    let mut gens: Vec<Vec<BigInt>> = radical
        .iter()
        .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = pb.clone();
        gens.push(e);
    }
    let h = Matrix::from_cols(n, &gens).hnf().truncate_cols(n);
    let gammas = h.columns();
    let mul_int = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            for j in 0..n {
                if x[i].is_zero() || y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for k in 0..n {
                    out[k] += &c * &mult[i][j][k];
                }
            }
        }
        out
    };
    // Column k: the action of w_k on I/pI in the basis of I.
    let mut rows = vec![vec![0u64; n]; n * n];
    for k in 0..n {
        let wk: Vec<BigInt> = (0..n)
            .map(|i| if i == k { BigInt::one() } else { BigInt::zero() })
            .collect();
        for (j, g) in gammas.iter().enumerate() {
            let prod = mul_int(&wk, g);
            let c = h
                .hnf_solve(&prod)
                .ok_or_else(|| Error::Internal(format!("p-radical at {p} is not an ideal")))?;
            for (t, ct) in c.iter().enumerate() {
                rows[j * n + t][k] = reduce_u64(ct, p);
            }
        }
    }
    Ok(rank_mod_p(&rows, p) == n)
}

/// Certifies irreducibility over Q of a monic integer polynomial.
fn irreducibility_witness(f: &IntPolynomial) -> std::result::Result<String, String> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return Ok("degree 1".into());
    }
    let disc = discriminant(f).map_err(|e| e.to_string())?;
    if disc.is_zero() {
        return Err("defining polynomial has a repeated root".into());
    }
    for p in crate::polyarith::primes_up_to(1000) {
        if (&disc % p).is_zero() {
            continue;
        }
        if ModPoly::from_int(f, p).is_irreducible() {
            return Ok(format!("irreducible modulo {p}"));
        }
    }
    // No inert prime (non-cyclic Galois group). Factor modulo a prime exceeding twice
    // the Mignotte bound and rule out every candidate factor by exact division.
    let norm2 = f.coeffs().iter().fold(BigInt::zero(), |acc, c| acc + c * c);
    let bound = (BigInt::one() << (n - 1)) * (norm2.sqrt() + 1u32);
    let mut p = next_prime(&(&bound * 2u32));
    while (&disc % &p).is_zero() {
        p = next_prime(&p);
    }
    let p64 = p.to_u64().ok_or("coefficient bound too large for the subset test")?;
    let factors = factor_mod_p(f, p64).map_err(|e| e.to_string())?;
    if factors.len() > 16 {
        return Err(format!("{} factors modulo {p64}; subset test too large", factors.len()));
    }
    let r = factors.len();
    for mask in 1u32..(1u32 << r) - 1 {
        let deg: usize = (0..r)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| factors[i].0.degree().unwrap_or(0))
            .sum();
        if deg * 2 > n {
            continue;
        }
        let g = (0..r)
            .filter(|i| mask >> i & 1 == 1)
            .fold(ModPoly::one(p64), |acc, i| acc.mul(&factors[i].0));
        if f.exact_div(&g.to_int_symmetric()).is_some() {
            return Err(format!("factor {} found", g.to_int_symmetric()));
        }
    }
    Ok(format!("no factor lifts from the factorization modulo {p64}"))
}

fn build(spec: &NumberFieldSpec) -> (VerificationReport, Option<NumberField>) {
    let mut report = VerificationReport::default();
    let f = spec.defining_poly.clone();
    let n = f.degree().unwrap_or(0);
    if n == 0 || !f.is_monic() {
        report.fail("defining polynomial", format!("{f} must be monic of positive degree"));
        return (report, None);
    }
    report.pass("defining polynomial", format!("monic of degree {n}"));
    match irreducibility_witness(&f) {
        Ok(w) => report.pass("irreducibility", w),
        Err(e) => {
            report.fail("irreducibility", e);
            return (report, None);
        }
    }
    let f_rat = f.to_rational();

    // integral basis
    if spec.integral_basis.len() != n || spec.integral_basis.iter().any(|r| r.len() != n) {
        report.fail("integral basis shape", format!("need {n} rows of length {n}"));
        return (report, None);
    }
    let bmat = Matrix::from_rows(spec.integral_basis.clone());
    let Some(to_basis) = bmat.inverse() else {
        report.fail("integral basis shape", "basis vectors are linearly dependent");
        return (report, None);
    };
    report.pass("integral basis shape", "n independent vectors");
    let basis: Vec<RatPolynomial> = spec
        .integral_basis
        .iter()
        .map(|r| RatPolynomial::new(r.clone()))
        .collect();
    let coords_of = |p: &RatPolynomial| -> Vec<BigRational> {
        let r = p.rem_monic(&f_rat);
        let row: Vec<BigRational> = (0..n).map(|i| r.coeff(i)).collect();
        row_times(&row, &to_basis)
    };
    let one_c = integer_vec(&coords_of(&RatPolynomial::one()));
    let theta_c = integer_vec(&coords_of(&RatPolynomial::x()));
    if one_c.is_none() || theta_c.is_none() {
        report.fail("ring contains 1 and theta", "1 or theta has non-integral coordinates");
        return (report, None);
    }
    report.pass("ring contains 1 and theta", "integral coordinates");

    let mut mult = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let c = coords_of(&(&basis[i] * &basis[j]));
            match integer_vec(&c) {
                Some(v) => {
                    mult[i][j] = v.clone();
                    mult[j][i] = v;
                }
                None => {
                    report.fail("ring closure", format!("w_{i} * w_{j} has coordinates outside Z"));
                    return (report, None);
                }
            }
        }
    }
    report.pass("ring closure", "all basis products integral");

    let traces: Vec<BigInt> = (0..n)
        .map(|k| (0..n).fold(BigInt::zero(), |acc, j| acc + &mult[k][j][j]))
        .collect();
    let tform: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &mult[i][j][k] * &traces[k]))
                .collect()
        })
        .collect();
    let disc = Matrix::from_rows(tform).determinant();
    let poly_disc = match discriminant(&f) {
        Ok(d) => d,
        Err(e) => {
            report.fail("discriminant consistency", e.to_string());
            return (report, None);
        }
    };
    let index = {
        let (quot, rem) = poly_disc.div_rem(&disc);
        let root = if quot.is_positive() {
            quot.sqrt()
        } else {
            BigInt::zero()
        };
        let det_b = bmat.determinant().abs();
        let consistent = rem.is_zero()
            && quot.is_positive()
            && &root * &root == quot
            && det_b * BigRational::from_integer(root.clone()) == BigRational::one();
        if !consistent {
            report.fail(
                "discriminant consistency",
                format!("disc(f) = {poly_disc}, basis discriminant = {disc}: quotient is not a square index"),
            );
            return (report, None);
        }
        report.pass(
            "discriminant consistency",
            format!("disc(f) = {poly_disc} = {root}^2 * {disc}"),
        );
        root
    };

    // automorphisms
    if spec.automorphisms.len() != n {
        report.fail(
            "Galois count",
            format!(
                "{} automorphisms supplied for a field of degree {n}",
                spec.automorphisms.len()
            ),
        );
        return (report, None);
    }
    report.pass("Galois count", format!("{n} automorphisms"));
    let auts: Vec<RatPolynomial> = spec.automorphisms.iter().map(|g| g.rem_monic(&f_rat)).collect();
    for (s, g) in auts.iter().enumerate() {
        if !f_rat.compose(g).rem_monic(&f_rat).is_zero() {
            report.fail("automorphism roots", format!("f(g_{s}(theta)) != 0"));
            return (report, None);
        }
    }
    report.pass("automorphism roots", "each image is a root of f");
    for i in 0..n {
        for j in i + 1..n {
            if auts[i] == auts[j] {
                report.fail("automorphism distinctness", format!("entries {i} and {j} coincide"));
                return (report, None);
            }
        }
    }
    report.pass("automorphism distinctness", "pairwise distinct");
    let id_poly = RatPolynomial::x().rem_monic(&f_rat);
    let Some(identity) = auts.iter().position(|g| *g == id_poly) else {
        report.fail("identity present", "no automorphism maps theta to theta");
        return (report, None);
    };
    report.pass("identity present", format!("entry {identity}"));
    let mut composition = vec![vec![0usize; n]; n];
    for s in 0..n {
        for t in 0..n {
            // s(t(theta)) = g_t(g_s(theta))
            let c = auts[t].compose(&auts[s]).rem_monic(&f_rat);
            match auts.iter().position(|g| *g == c) {
                Some(k) => composition[s][t] = k,
                None => {
                    report.fail(
                        "group closure",
                        format!("composition of {s} and {t} is not in the list"),
                    );
                    return (report, None);
                }
            }
        }
    }
    report.pass("group closure", "composition table closed; K/Q is Galois");

    // not fatal: later checks do not use the action on the basis
    let mut aut_cols = Vec::with_capacity(n);
    let mut moved = None;
    for (s, g) in auts.iter().enumerate() {
        let mut cols = Vec::with_capacity(n);
        for (j, w) in basis.iter().enumerate() {
            match integer_vec(&coords_of(&w.compose(g))) {
                Some(v) => cols.push(v),
                None => {
                    moved.get_or_insert((s, j));
                    cols.push(vec![BigInt::zero(); n]);
                }
            }
        }
        aut_cols.push(cols);
    }
    match moved {
        None => report.pass("automorphisms preserve the order", "all images integral"),
        Some((s, j)) => report.fail(
            "automorphisms preserve the order",
            format!("automorphism {s} moves w_{j} outside the order"),
        ),
    }

    let mut field = NumberField {
        spec: spec.clone(),
        n,
        f: f.clone(),
        f_rat,
        basis,
        to_basis,
        mult,
        traces,
        poly_disc,
        disc,
        index,
        automorphisms: auts,
        identity,
        composition,
        aut_cols,
        quadratic_subfields: Vec::new(),
        factorizations: BTreeMap::new(),
        report: VerificationReport::default(),
    };

    // quadratic subfields
    let expected = index_two_subgroups(&field.composition, field.identity);
    let mut seen = Vec::new();
    let mut sub_ok = true;
    for (i, qs) in spec.quadratic_subfields.iter().enumerate() {
        let m = &qs.m;
        if m.is_one() || m.is_zero() || !is_squarefree(m) {
            report.fail(
                "quadratic subfield witnesses",
                format!("entry {i}: m = {m} is not a squarefree integer != 0, 1"),
            );
            sub_ok = false;
            break;
        }
        if seen.contains(m) {
            report.fail("quadratic subfield witnesses", format!("entry {i}: m = {m} repeated"));
            sub_ok = false;
            break;
        }
        if qs.witness.len() != n {
            report.fail(
                "quadratic subfield witnesses",
                format!("entry {i}: witness needs {n} coordinates"),
            );
            sub_ok = false;
            break;
        }
        let w = FieldElement::new(qs.witness.clone());
        if field.mul(&w, &w) != field.from_integer(m) {
            report.fail("quadratic subfield witnesses", format!("entry {i}: w^2 != {m}"));
            sub_ok = false;
            break;
        }
        seen.push(m.clone());
        field.quadratic_subfields.push((m.clone(), w));
    }
    if sub_ok {
        report.pass(
            "quadratic subfield witnesses",
            format!("w^2 = m verified for m in {seen:?}"),
        );
        if seen.len() == expected {
            report.pass(
                "quadratic subfield count",
                format!("{expected} index-2 subgroups, {expected} subfields supplied"),
            );
        } else {
            report.fail(
                "quadratic subfield count",
                format!("{expected} index-2 subgroups but {} subfields supplied", seen.len()),
            );
        }
    }

    if spec.class_number == 0 {
        report.fail("class number", "class number must be positive");
    } else {
        report.assume(
            "class number",
            format!("h_K = {} asserted by the input", spec.class_number),
        );
    }

    // maximality at primes whose square divides the basis discriminant
    let fac = factorize(&field.disc, &FactorOptions::default());
    for (p, (e, _)) in &fac.primes {
        if *e < 2 {
            continue;
        }
        let name = format!("maximality at {p}");
        let Some(p64) = p.to_u64() else {
            if spec.maximality_assumed {
                report.assume(name, "prime too large to test; maximality asserted");
            } else {
                report.fail(name, "prime too large to test");
            }
            continue;
        };
        // the order agrees with Z[theta] at p when p does not divide the index
        if !(&field.index % p).is_zero() && dedekind_p_maximal(&f, p64).unwrap_or(false) {
            report.pass(name, "Dedekind criterion");
            continue;
        }
        match field.order_is_p_maximal(p64) {
            Ok(true) => report.pass(name, "multiplier ring of the p-radical equals the order"),
            Ok(false) => report.fail(name, format!("the order is not maximal at {p}")),
            Err(e) => report.fail(name, e.to_string()),
        }
    }
    for c in &fac.cofactors {
        let name = format!("maximality at unfactored {c}");
        if spec.maximality_assumed {
            report.assume(name, "discriminant not fully factored; maximality asserted");
        } else {
            report.fail(name, "discriminant not fully factored");
        }
    }

    // supplied factorizations at index divisors
    for pf in &spec.prime_factorizations {
        let name = format!("prime factorization at {}", pf.p);
        let claimed: Result<Vec<_>> = pf
            .factors
            .iter()
            .map(|(gens, e)| {
                let els: Vec<FieldElement> = gens.iter().map(|g| FieldElement::new(g.clone())).collect();
                Ok((super::ideal::IntegralIdeal::from_generators(&field, &els)?, *e))
            })
            .collect();
        match claimed.and_then(|c| field.verify_prime_factorization(pf.p, &c)) {
            Ok(sd) => {
                report.pass(name, format!("verified {:?}", sd.factors));
                field.factorizations.insert(pf.p, sd);
            }
            Err(e) => report.fail(name, e.to_string()),
        }
    }

    field.report = report.clone();
    let ok = report.all_passed();
    (report, ok.then_some(field))
}

/// Number of subgroups of index 2: `|G / G^2| - 1`.
fn index_two_subgroups(table: &[Vec<usize>], identity: usize) -> usize {
    let n = table.len();
    let mut sub = vec![identity];
    for s in 0..n {
        let sq = table[s][s];
        if !sub.contains(&sq) {
            sub.push(sq);
        }
    }
    loop {
        let mut grew = false;
        for i in 0..sub.len() {
            for j in 0..sub.len() {
                let c = table[sub[i]][sub[j]];
                if !sub.contains(&c) {
                    sub.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    n / sub.len() - 1
}

#[cfg(test)]
pub(crate) struct TestRing {
    mult: Vec<Vec<Vec<BigInt>>>,
    n: usize,
}

/// Structure constants of `Z[theta]` alone, for testing the maximality routine.
#[cfg(test)]
pub(crate) fn ring_for_tests(spec: &NumberFieldSpec) -> TestRing {
    let f = spec.defining_poly.to_rational();
    let n = spec.degree();
    let mut mult = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let r = RatPolynomial::monomial(BigRational::one(), i + j).rem_monic(&f);
            mult[i][j] = (0..n).map(|k| r.coeff(k).to_integer()).collect();
        }
    }
    TestRing { mult, n }
}

#[cfg(test)]
impl TestRing {
    pub(crate) fn order_is_p_maximal(&self, p: u64) -> Result<bool> {
        order_is_p_maximal(&self.mult, self.n, p)
    }
}
