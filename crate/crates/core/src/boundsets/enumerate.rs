//! Enumeration of `(q, epsilon, beta)` and the prime sets `N_0`, `T`, `Ram`, `N_1`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classdata::ClassData;
use super::norms::{beta_in_field, norm_value_pieces, ExponentVector, NormPieces, Variant};
use super::weil::{frobenius_roots, FrobeniusRoot};
use crate::error::{Error, Result};
use crate::numfield::NumberField;
use crate::polyarith::{factorize, FactorOptions, Factorization, Primality};

pub const DEFAULT_TUPLE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    /// Largest number of exponent tuples per generator.
    pub budget: u64,
    /// Automorphism indices allowed a nonzero exponent; `None` enumerates all of them.
    pub support: Option<Vec<usize>>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub factor: FactorOptions,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            budget: DEFAULT_TUPLE_BUDGET,
            support: None,
            threads: None,
            factor: FactorOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrimeSource {
    N0,
    T,
    Ram,
}

/// Which integer a witnessed prime divides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessFactor {
    /// `N_K(x^2 - t_m x + q^m)`.
    Product,
    /// `N_K(x - beta^m)` with `beta = (-a + sqrt(a^2 - 4q)) / 2` in `K`.
    Beta,
    /// `N_K(x - conj(beta)^m)`.
    BetaConjugate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormWitness {
    pub q: u64,
    pub epsilon: ExponentVector,
    pub a: i64,
    pub factor: WitnessFactor,
    #[serde(with = "crate::jsonint")]
    pub value: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeProvenance {
    #[serde(with = "crate::jsonint")]
    pub prime: BigInt,
    pub sources: Vec<PrimeSource>,
    pub primality: Primality,
    /// First `(q, epsilon, a)` in enumeration order whose value the prime divides.
    pub witness: Option<NormWitness>,
}

/// A composite part of a norm value that the factoring budget did not split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnfactoredValue {
    #[serde(with = "crate::jsonint")]
    pub cofactor: BigInt,
    pub witness: NormWitness,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationStats {
    pub generators: usize,
    pub exponent_tuples: u64,
    pub orbit_representatives: u64,
    pub triples: u64,
    pub zero_values: u64,
    pub distinct_factored_pieces: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSets {
    pub variant: Variant,
    /// `m` in `beta^m`.
    pub beta_exponent: u32,
    #[serde(with = "crate::jsonint::vec")]
    pub n0: Vec<BigInt>,
    pub t: Vec<u64>,
    pub ram: Vec<u64>,
    /// `Ram` is the set of primes dividing the basis discriminant of an order only
    /// assumed maximal.
    pub ram_upper_bound_only: bool,
    #[serde(with = "crate::jsonint::vec")]
    pub n1: Vec<BigInt>,
    pub provenance: Vec<PrimeProvenance>,
    pub unfactored: Vec<UnfactoredValue>,
    pub support: Option<Vec<usize>>,
    pub stats: EnumerationStats,
}

impl ExceptionalSets {
    pub fn complete_factorization(&self) -> bool {
        self.unfactored.is_empty()
    }

    /// All exponent tuples were enumerated.
    pub fn is_exhaustive(&self) -> bool {
        self.support.is_none()
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        self.n1.binary_search(p).is_ok()
    }

    pub fn cofactors(&self) -> Vec<BigInt> {
        self.unfactored.iter().map(|u| u.cofactor.clone()).collect()
    }

    pub fn probable_primes(&self) -> Vec<BigInt> {
        self.provenance
            .iter()
            .filter(|p| p.primality == Primality::ProbablePrime)
            .map(|p| p.prime.clone())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub variant: Variant,
    pub degree: usize,
    pub free_slots: usize,
    pub values_per_slot: usize,
    #[serde(with = "crate::jsonint")]
    pub tuples: BigInt,
    pub budget: u64,
}

impl fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "enumeration infeasible at degree {}: {}^{} = {} exponent tuples exceed the budget of {}",
            self.degree, self.values_per_slot, self.free_slots, self.tuples, self.budget
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "result")]
pub enum Enumeration {
    Complete(ExceptionalSets),
    Infeasible(BudgetReport),
}

impl Enumeration {
    pub fn complete(self) -> Option<ExceptionalSets> {
        match self {
            Enumeration::Complete(s) => Some(s),
            Enumeration::Infeasible(_) => None,
        }
    }
}

/// Exponent vectors with entries from `values` on `slots`, zero elsewhere, in
/// lexicographic order of the value indices (slot 0 most significant).
fn exponent_tuples(n: usize, slots: &[usize], values: &[u32]) -> Vec<ExponentVector> {
    let mut out = vec![ExponentVector::zero(n)];
    for &s in slots {
        out = out
            .into_iter()
            .flat_map(|e| {
                values.iter().map(move |&v| {
                    let mut e = e.clone();
                    e.0[s] = v;
                    e
                })
            })
            .collect();
    }
    out
}

struct Recorder<'a> {
    factored: &'a BTreeMap<BigInt, Factorization>,
    n0: BTreeMap<BigInt, (Primality, NormWitness)>,
    unfactored: BTreeMap<BigInt, NormWitness>,
}

impl Recorder<'_> {
    fn record(&mut self, pieces: &NormPieces, witness: impl Fn(BigInt) -> NormWitness) {
        let mut value = None;
        let mut get = |p: &NormPieces| value.get_or_insert_with(|| witness(p.value())).clone();
        let factored = self.factored;
        for piece in &pieces.pieces {
            if piece.is_one() {
                continue;
            }
            let fac = &factored[piece];
            for (p, (_, flag)) in &fac.primes {
                if !self.n0.contains_key(p) {
                    self.n0.insert(p.clone(), (*flag, get(pieces)));
                }
            }
            for c in &fac.cofactors {
                if !self.unfactored.contains_key(c) {
                    self.unfactored.insert(c.clone(), get(pieces));
                }
            }
        }
    }
}

/// Builds `N_0`, `T`, `Ram` and `N_1` for one variant.
pub fn build_exceptional_sets(
    k: &NumberField,
    class_data: &ClassData,
    variant: Variant,
    opts: &EnumerationOptions,
) -> Result<Enumeration> {
    let n = k.automorphism_count();
    let slots: Vec<usize> = match &opts.support {
        Some(s) => {
            let set: BTreeSet<usize> = s.iter().copied().collect();
            if set.iter().any(|&i| i >= n) {
                return Err(Error::invalid(format!(
                    "support index out of range for {n} automorphisms"
                )));
            }
            set.into_iter().collect()
        }
        None => (0..n).collect(),
    };
    let values = variant.exponent_values();
    let count = BigUint::from(values.len()).pow(slots.len() as u32);
    if count > BigUint::from(opts.budget) {
        return Ok(Enumeration::Infeasible(BudgetReport {
            variant,
            degree: k.degree(),
            free_slots: slots.len(),
            values_per_slot: values.len(),
            tuples: count.into(),
            budget: opts.budget,
        }));
    }
    let run = || enumerate(k, class_data, variant, opts, &slots).map(Enumeration::Complete);
    match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn enumerate(
    k: &NumberField,
    class_data: &ClassData,
    variant: Variant,
    opts: &EnumerationOptions,
    slots: &[usize],
) -> Result<ExceptionalSets> {
    let n = k.automorphism_count();
    let m = variant.beta_exponent(class_data.h)?;
    let tuples = exponent_tuples(n, slots, &variant.exponent_values());
    let table = k.composition_table();
    let reps: Vec<ExponentVector> = tuples.par_iter().map(|e| e.orbit_representative(table)).collect();
    let unique: Vec<ExponentVector> = reps.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut stats = EnumerationStats {
        generators: class_data.generators.len(),
        exponent_tuples: tuples.len() as u64,
        orbit_representatives: unique.len() as u64,
        ..Default::default()
    };

    struct GeneratorData {
        roots: Vec<FrobeniusRoot>,
        products: HashMap<(ExponentVector, i64), NormPieces>,
        /// `(tuple index, a)` -> pieces for `x - beta^m` and `x - conj(beta)^m`
        split: HashMap<(usize, i64), [NormPieces; 2]>,
    }
    let mut per_gen = Vec::new();
    let mut all_pieces = BTreeSet::new();
    for g in &class_data.generators {
        let roots = frobenius_roots(g.q)?;
        let amax = roots.last().expect("a = 0 is always a root").a;
        // beta^m depends on a only through |a| since m is even
        let jobs: Vec<(&ExponentVector, i64)> = unique.iter().flat_map(|e| (0..=amax).map(move |a| (e, a))).collect();
        let products = jobs
            .par_iter()
            .map(|&(e, a)| {
                let root = FrobeniusRoot { a, q: g.q };
                norm_value_pieces(k, &g.alpha, e, &root, m, None).map(|p| ((e.clone(), a), p))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        let betas: BTreeMap<i64, _> = roots
            .iter()
            .filter_map(|r| beta_in_field(k, r).map(|b| (r.a, b)))
            .collect();
        let degenerate: Vec<(usize, i64)> = tuples
            .iter()
            .enumerate()
            .flat_map(|(i, _)| roots.iter().map(move |r| (i, r.a)))
            .filter(|(i, a)| betas.contains_key(a) && products[&(reps[*i].clone(), a.abs())].is_zero())
            .collect();
        let split = degenerate
            .par_iter()
            .map(|&(i, a)| {
                let root = FrobeniusRoot { a, q: g.q };
                let (b, bc) = &betas[&a];
                let one = norm_value_pieces(k, &g.alpha, &tuples[i], &root, m, Some(b))?;
                let two = norm_value_pieces(k, &g.alpha, &tuples[i], &root, m, Some(bc))?;
                Ok(((i, a), [one, two]))
            })
            .collect::<Result<HashMap<_, _>>>()?;
        for p in products.values().chain(split.values().flatten()) {
            if !p.is_zero() {
                all_pieces.extend(p.pieces.iter().filter(|x| !x.is_one()).cloned());
            }
        }
        per_gen.push(GeneratorData { roots, products, split });
    }

    let pieces: Vec<BigInt> = all_pieces.into_iter().collect();
    stats.distinct_factored_pieces = pieces.len() as u64;
    let factored: BTreeMap<BigInt, Factorization> = pieces
        .par_iter()
        .map(|x| (x.clone(), factorize(x, &opts.factor)))
        .collect();

    let mut rec = Recorder {
        factored: &factored,
        n0: BTreeMap::new(),
        unfactored: BTreeMap::new(),
    };
    for (g, data) in class_data.generators.iter().zip(&per_gen) {
        for (i, eps) in tuples.iter().enumerate() {
            for r in &data.roots {
                stats.triples += 1;
                let witness = |factor| {
                    let eps = eps.clone();
                    let (q, a) = (g.q, r.a);
                    move |value| NormWitness {
                        q,
                        epsilon: eps.clone(),
                        a,
                        factor,
                        value,
                    }
                };
                let prod = &data.products[&(reps[i].clone(), r.a.abs())];
                if !prod.is_zero() {
                    rec.record(prod, witness(WitnessFactor::Product));
                    continue;
                }
                stats.zero_values += 1;
                if let Some([one, two]) = data.split.get(&(i, r.a)) {
                    for (p, f) in [(one, WitnessFactor::Beta), (two, WitnessFactor::BetaConjugate)] {
                        if !p.is_zero() {
                            rec.record(p, witness(f));
                        }
                    }
                }
            }
        }
    }

    let mut t: BTreeSet<u64> = [2, 3].into_iter().collect();
    t.extend(class_data.residue_characteristics());
    let ram = k.ramified_primes()?;
    let mut sources: BTreeMap<BigInt, (Vec<PrimeSource>, Primality, Option<NormWitness>)> = BTreeMap::new();
    for (p, (flag, w)) in &rec.n0 {
        sources.insert(p.clone(), (vec![PrimeSource::N0], *flag, Some(w.clone())));
    }
    for (src, set) in [
        (PrimeSource::T, t.iter().copied().collect::<Vec<_>>()),
        (PrimeSource::Ram, ram.primes.clone()),
    ] {
        for p in set {
            sources
                .entry(BigInt::from(p))
                .or_insert_with(|| (Vec::new(), Primality::Prime, None))
                .0
                .push(src);
        }
    }
    let provenance: Vec<PrimeProvenance> = sources
        .into_iter()
        .map(|(prime, (sources, primality, witness))| PrimeProvenance {
            prime,
            sources,
            primality,
            witness,
        })
        .collect();
    Ok(ExceptionalSets {
        variant,
        beta_exponent: m,
        n0: rec.n0.keys().cloned().collect(),
        t: t.into_iter().collect(),
        ram: ram.primes,
        ram_upper_bound_only: ram.upper_bound_only,
        n1: provenance.iter().map(|p| p.prime.clone()).collect(),
        provenance,
        unfactored: rec
            .unfactored
            .into_iter()
            .map(|(cofactor, witness)| UnfactoredValue { cofactor, witness })
            .collect(),
        support: if slots.len() == n { None } else { Some(slots.to_vec()) },
        stats,
    })
}
