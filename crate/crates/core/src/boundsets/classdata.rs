//! The generating set `S` of prime ideals with `q^h = alpha O`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numfield::{ClassGeneratorSpec, FieldElement, IntegralIdeal, NumberField};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGenerator {
    pub q: u64,
    /// `f(root) = 0 mod q`; the ideal is `(q, theta - root)`.
    pub root: u64,
    pub ideal: IntegralIdeal,
    /// Generator of `ideal^h`.
    pub alpha: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub h: u64,
    pub generators: Vec<ClassGenerator>,
}

impl ClassData {
    /// Verifies the class generators stored with the field.
    pub fn from_field(k: &NumberField) -> Result<Self> {
        Self::verify(k, &k.spec().class_generators)
    }

    /// Checks each `q` splits completely with `q` prime to `6h`, and `alpha O = (q, theta - r)^h`.
    pub fn verify(k: &NumberField, specs: &[ClassGeneratorSpec]) -> Result<Self> {
        let h = k.class_number();
        if specs.is_empty() {
            return Err(Error::verification("class generators", "the generating set S is empty"));
        }
        let mut generators = Vec::with_capacity(specs.len());
        for (i, g) in specs.iter().enumerate() {
            let fail =
                |detail: String| Error::verification("class generators", format!("entry {i} (q = {}): {detail}", g.q));
            if !k.splits_completely(g.q)? {
                return Err(fail("q does not split completely".into()));
            }
            if (6 * h) % g.q == 0 {
                return Err(fail(format!("q divides 6h = {}", 6 * h)));
            }
            let ideal = k.ideal_from_prime(g.q, g.root).map_err(|e| fail(e.to_string()))?;
            let alpha = FieldElement::new(g.alpha.clone());
            if alpha.dim() != k.degree() {
                return Err(fail("alpha has the wrong number of coordinates".into()));
            }
            let power = k.ideal_power(&ideal, h);
            if !k.verify_principal_generator(&power, &alpha) {
                return Err(fail(format!("alpha does not generate the {h}-th power of the ideal")));
            }
            generators.push(ClassGenerator {
                q: g.q,
                root: g.root,
                ideal,
                alpha,
            });
        }
        Ok(ClassData { h, generators })
    }

    /// Residue characteristics of `S`, ascending and distinct.
    pub fn residue_characteristics(&self) -> Vec<u64> {
        let mut qs: Vec<u64> = self.generators.iter().map(|g| g.q).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    pub fn alpha_norms(&self, k: &NumberField) -> Vec<BigInt> {
        self.generators.iter().map(|g| k.norm(&g.alpha).to_integer()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::bundled;
    use num_rational::BigRational;

    #[test]
    fn bundled_class_data_verifies() {
        for (key, _) in bundled::FIELDS {
            let k = bundled::field(key).unwrap();
            let cd = ClassData::from_field(&k).unwrap();
            assert_eq!(cd.h, k.class_number());
            for (g, nm) in cd.generators.iter().zip(cd.alpha_norms(&k)) {
                assert_eq!(
                    nm.magnitude(),
                    &num_bigint::BigUint::from(g.q).pow(cd.h as u32),
                    "{key}"
                );
            }
        }
    }

    #[test]
    fn bad_generators_are_rejected() {
        let k = bundled::field("q_sqrt_m5").unwrap();
        let mut spec = k.spec().class_generators[0].clone();
        spec.alpha = vec![BigRational::from_integer(3.into()), BigRational::from_integer(0.into())];
        assert!(ClassData::verify(&k, &[spec.clone()]).is_err());
        // 3 splits in Q(sqrt -5) but divides 6h
        spec.q = 3;
        spec.root = 1;
        assert!(ClassData::verify(&k, &[spec]).is_err());
        assert!(ClassData::verify(&k, &[]).is_err());
    }
}
