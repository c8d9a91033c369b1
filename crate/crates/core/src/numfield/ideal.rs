//! Integral ideals as full-rank lattices in Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::element::FieldElement;
use super::field::NumberField;
use super::splitting::{SplittingData, SplittingSource};
use crate::error::{Error, Result};
use crate::polyarith::{first_dependence, reduce_mod, ModPoly, DEFAULT_SEED};
use crate::IntMatrix;

/// An ideal of the order, stored as the upper-triangular HNF of its lattice in
/// integral-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralIdeal {
    hnf: IntMatrix,
}

fn unit_vec(n: usize, i: usize, v: BigInt) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[i] = v;
    e
}

impl IntegralIdeal {
    /// The ideal generated by integral elements, at least one nonzero.
    pub fn from_generators(k: &NumberField, gens: &[FieldElement]) -> Result<Self> {
        let n = k.degree();
        let mut ints = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if g.dim() != n {
                return Err(Error::invalid(format!(
                    "generator {i} has {} coordinates, need {n}",
                    g.dim()
                )));
            }
            ints.push(
                g.integer_coords()
                    .ok_or_else(|| Error::invalid(format!("generator {i} is not integral")))?,
            );
        }
        let Some(first) = ints.iter().find(|v| v.iter().any(|c| !c.is_zero())) else {
            return Err(Error::invalid("ideal generators are all zero"));
        };
        // |N(g)| lies in (g), so the lattice contains |N(g)| Z^n
        let d = k.mul_matrix_int(first).determinant().abs();
        let mut cols = Vec::new();
        for g in &ints {
            for j in 0..n {
                cols.push(k.mul_int(g, &unit_vec(n, j, BigInt::one())));
            }
        }
        let h = IntMatrix::from_cols(n, &cols).hnf_modular(&d);
        Ok(IntegralIdeal { hnf: h })
    }

    /// Wraps a matrix after checking it is a square HNF whose lattice is an ideal.
    pub fn from_hnf(k: &NumberField, m: IntMatrix) -> Result<Self> {
        let n = k.degree();
        if m.rows() != n || m.cols() != n || m != m.hnf() {
            return Err(Error::invalid("matrix is not a square Hermite normal form"));
        }
        if (0..n).any(|i| !m.get(i, i).is_positive()) {
            return Err(Error::invalid("lattice is not of full rank"));
        }
        for col in m.columns() {
            for j in 0..n {
                let prod = k.mul_int(&col, &unit_vec(n, j, BigInt::one()));
                if !m.lattice_contains(&prod) {
                    return Err(Error::invalid(
                        "lattice is not closed under multiplication by the basis",
                    ));
                }
            }
        }
        Ok(IntegralIdeal { hnf: m })
    }

    pub fn unit(k: &NumberField) -> Self {
        IntegralIdeal {
            hnf: IntMatrix::identity(k.degree()),
        }
    }

    pub fn principal(k: &NumberField, x: &FieldElement) -> Result<Self> {
        Self::from_generators(k, std::slice::from_ref(x))
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    /// `[O : I]`, the product of the diagonal.
    pub fn norm(&self) -> BigInt {
        (0..self.hnf.rows()).fold(BigInt::one(), |acc, i| acc * self.hnf.get(i, i))
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        match x.integer_coords() {
            Some(v) => self.hnf.lattice_contains(&v),
            None => false,
        }
    }

    /// Canonical representative of `v` modulo the lattice, with `0 <= v_i < h_ii`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut r = v.to_vec();
        for j in (0..self.hnf.cols()).rev() {
            let q = r[j].div_floor(self.hnf.get(j, j));
            if q.is_zero() {
                continue;
            }
            for (i, ri) in r.iter_mut().enumerate().take(j + 1) {
                *ri -= &q * self.hnf.get(i, j);
            }
        }
        r
    }

    /// The HNF columns as elements.
    pub fn basis_elements(&self) -> Vec<FieldElement> {
        self.hnf
            .columns()
            .into_iter()
            .map(FieldElement::from_integers)
            .collect()
    }
}

impl NumberField {
    /// The ideal `(q, theta - r)` above a prime `q` with `f(r) = 0 mod q`.
    pub fn ideal_from_prime(&self, q: u64, r: u64) -> Result<IntegralIdeal> {
        if !crate::polyarith::is_prime_u64(q) {
            return Err(Error::NotPrime(q.to_string()));
        }
        let fr = self.defining_poly().eval(&BigInt::from(r));
        if !(fr % q).is_zero() {
            return Err(Error::invalid(format!("f({r}) is not divisible by {q}")));
        }
        let qb = BigInt::from(q);
        let t = self.theta().sub(&self.from_integer(&BigInt::from(r)));
        let ideal = IntegralIdeal::from_generators(self, &[self.from_integer(&qb), t])?;
        if ideal.norm() != qb {
            return Err(Error::invalid(format!(
                "(q, theta - {r}) has norm {} rather than {q}; q divides the index",
                ideal.norm()
            )));
        }
        Ok(ideal)
    }

    pub fn ideal_multiply(&self, a: &IntegralIdeal, b: &IntegralIdeal) -> IntegralIdeal {
        let n = self.degree();
        let d = a.norm() * b.norm();
        let mut cols = Vec::with_capacity(n * n);
        for x in a.hnf.columns() {
            for y in b.hnf.columns() {
                cols.push(self.mul_int(&x, &y));
            }
        }
        IntegralIdeal {
            hnf: IntMatrix::from_cols(n, &cols).hnf_modular(&d),
        }
    }

    pub fn ideal_power(&self, a: &IntegralIdeal, mut k: u64) -> IntegralIdeal {
        let mut acc = IntegralIdeal::unit(self);
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.ideal_multiply(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.ideal_multiply(&base, &base);
            }
        }
        acc
    }

    /// `I = alpha O` iff `alpha` lies in `I` and `|N(alpha)| = N(I)`.
    pub fn verify_principal_generator(&self, ideal: &IntegralIdeal, alpha: &FieldElement) -> bool {
        if alpha.is_zero() || !alpha.is_integral() || !ideal.contains(alpha) {
            return false;
        }
        let nm = self.norm(alpha);
        nm.is_integer() && nm.to_integer().abs() == ideal.norm()
    }

    /// Checks a claimed factorization `p O = prod I_i^{e_i}` into prime ideals.
    pub fn verify_prime_factorization(&self, p: u64, claimed: &[(IntegralIdeal, u32)]) -> Result<SplittingData> {
        let fail = |check: &str, detail: String| Err(Error::verification(check, detail));
        if !crate::polyarith::is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if claimed.is_empty() {
            return fail("product mismatch", "no prime ideals supplied".into());
        }
        let n = self.degree();
        let pb = BigInt::from(p);
        let product = claimed.iter().fold(IntegralIdeal::unit(self), |acc, (i, e)| {
            self.ideal_multiply(&acc, &self.ideal_power(i, u64::from(*e)))
        });
        let p_o = IntegralIdeal::principal(self, &self.from_integer(&pb))?;
        if product != p_o {
            return fail("product mismatch", format!("product of the claimed ideals is not {p}O"));
        }
        let mut factors = Vec::with_capacity(claimed.len());
        for (idx, (ideal, e)) in claimed.iter().enumerate() {
            let nm = ideal.norm();
            let mut f = 0u32;
            let mut rest = nm.clone();
            while (&rest % p).is_zero() {
                rest /= p;
                f += 1;
            }
            if !rest.is_one() || f == 0 {
                return fail(
                    "residue degree",
                    format!("ideal {idx} has norm {nm}, not a power of {p}"),
                );
            }
            if *e == 0 {
                return fail("product mismatch", format!("ideal {idx} has exponent 0"));
            }
            self.certify_residue_field(ideal, p, f)
                .map_err(|d| Error::verification("residue field", format!("ideal {idx}: {d}")))?;
            factors.push((*e, f));
        }
        let total: u32 = factors.iter().map(|(e, f)| e * f).sum();
        if total as usize != n {
            return fail("degree sum", format!("sum of e*f is {total}, degree is {n}"));
        }
        for i in 0..claimed.len() {
            for j in i + 1..claimed.len() {
                if claimed[i].0 == claimed[j].0 {
                    return fail("distinct primes", format!("ideals {i} and {j} coincide"));
                }
            }
        }
        Ok(SplittingData::new(p, factors, SplittingSource::VerifiedFactorization))
    }

    /// Shows `O/I` is the field with `p^f` elements by exhibiting an element whose
    /// minimal polynomial over F_p is irreducible of degree `f`.
    fn certify_residue_field(&self, ideal: &IntegralIdeal, p: u64, f: u32) -> std::result::Result<(), String> {
        let n = self.degree();
        let pb = BigInt::from(p);
        let free: Vec<usize> = (0..n).filter(|&i| *ideal.hnf.get(i, i) != BigInt::one()).collect();
        if free.len() != f as usize || free.iter().any(|&i| *ideal.hnf.get(i, i) != pb) {
            return Err(format!("ideal does not contain {p}O"));
        }
        let min_poly = |x: &[BigInt]| -> Option<ModPoly> {
            let mut powers = Vec::with_capacity(f as usize + 1);
            let one = self.one().integer_coords().expect("1 is integral");
            let mut cur = ideal.reduce(&one);
            for _ in 0..=f {
                powers.push(free.iter().map(|&i| reduce_mod(&cur[i], p)).collect::<Vec<u64>>());
                cur = ideal.reduce(&self.mul_int(&cur, x));
            }
            first_dependence(&powers, p).map(|c| ModPoly::new(p, c))
        };
        let mut candidates: Vec<Vec<BigInt>> = (0..n).map(|i| unit_vec(n, i, BigInt::one())).collect();
        for i in 0..n {
            for j in i + 1..n {
                let mut v = unit_vec(n, i, BigInt::one());
                v[j] = BigInt::one();
                candidates.push(v);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ p);
        for _ in 0..64 {
            candidates.push((0..n).map(|_| BigInt::from(rng.gen_range(0..p))).collect());
        }
        for x in &candidates {
            if let Some(m) = min_poly(x) {
                if m.degree() == Some(f as usize) && m.is_irreducible() {
                    return Ok(());
                }
            }
        }
        Err(format!(
            "no element of degree {f} found; quotient not certified to be a field"
        ))
    }
}
