//! The certificate driver: hypothesis checks, auxiliary prime search, exceptional sets
//! and the assembled verdict for a pair `(d, K)`.

mod replay;

pub use replay::{replay_paper_examples, ReplayCheck, SPLITTING_CONGRUENCES};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boundsets::{
    assemble_gamma0_report, assemble_irreducibility_bound, build_exceptional_sets, ClassData, Enumeration,
    EnumerationOptions, Gamma0Report, IrreducibilityBound, Variant,
};
use crate::error::{Error, Result};
use crate::numfield::{verify_field_spec, NumberField, NumberFieldSpec, VerificationReport};
use crate::polyarith::{factor_mod_p_seeded, is_prime_u64, FactorOptions, DEFAULT_SEED};
use crate::quadforms::{hcf_containment_check, HcfVerdict};
use crate::quaternion::{find_presentation, nonsplit_witness, QuaternionAlgebra};
use crate::shimura::{moduli_flags, ModuliFlags};

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_Q_CEILING: u64 = 1_000_000;

/// Parses a field file, JSON when the text starts with `{` and TOML otherwise.
pub fn parse_field_source(text: &str) -> Result<NumberFieldSpec> {
    if text.trim_start().starts_with('{') {
        NumberFieldSpec::from_json_str(text)
    } else {
        NumberFieldSpec::from_toml_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryPrime {
    pub q: u64,
    /// Roots of the defining polynomial modulo `q`, one per linear factor.
    pub roots_mod_q: Vec<u64>,
    /// A prime of `d` that splits in `Q(sqrt(-q))`.
    pub splitting_prime_of_d: u64,
}

/// Least prime `q <= ceiling` splitting completely in `K` with `B ⊗ Q(sqrt(-q))` a
/// division algebra. Primes dividing the index of `Z[theta]` without a supplied
/// factorization are skipped.
pub fn find_minimal_q(k: &NumberField, b: &QuaternionAlgebra, ceiling: u64, seed: u64) -> Result<AuxiliaryPrime> {
    for q in (2..=ceiling).filter(|&q| is_prime_u64(q)) {
        if let Some(p) = nonsplit_witness(b, q) {
            match k.splits_completely(q) {
                Ok(true) => {
                    return Ok(AuxiliaryPrime {
                        q,
                        roots_mod_q: roots_mod(k, q, seed)?,
                        splitting_prime_of_d: p,
                    })
                }
                Ok(false) | Err(Error::IndexDivisor(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::invalid(format!("no q found below ceiling {ceiling}")))
}

fn roots_mod(k: &NumberField, q: u64, seed: u64) -> Result<Vec<u64>> {
    let mut roots = Vec::new();
    for (g, _) in factor_mod_p_seeded(k.defining_poly(), q, seed)? {
        match g.coeffs() {
            [c, 1] => roots.push((q - c) % q),
            _ => {
                return Err(Error::Internal(format!(
                    "nonlinear factor of f mod {q} for a split prime"
                )))
            }
        }
    }
    roots.sort_unstable();
    Ok(roots)
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub gamma0: bool,
    /// Skip enumeration and report the hypotheses only.
    pub exceptional_sets: bool,
    pub budget: u64,
    pub seed: u64,
    pub threads: Option<usize>,
    pub q_ceiling: u64,
    pub support: Option<Vec<usize>>,
    pub factor: FactorOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        let e = EnumerationOptions::default();
        CertifyOptions {
            gamma0: false,
            exceptional_sets: true,
            budget: e.budget,
            seed: DEFAULT_SEED,
            threads: None,
            q_ceiling: DEFAULT_Q_CEILING,
            support: None,
            factor: e.factor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub d: u64,
    pub field_name: String,
    pub field_sha256: String,
    /// Hash of the automorphism composition table as compact JSON.
    pub automorphism_table_sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assumption {
    pub name: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Verified,
    Failed,
    NotRun,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub checks: Vec<Hypothesis>,
    pub hcf: Option<HcfVerdict>,
    pub auxiliary_prime: Option<AuxiliaryPrime>,
}

impl Hypotheses {
    fn record(&mut self, name: &str, status: HypothesisStatus, detail: impl Into<String>) {
        self.checks.push(Hypothesis {
            name: name.to_string(),
            status,
            detail: detail.into(),
        });
    }

    pub fn get(&self, name: &str) -> Option<&Hypothesis> {
        self.checks.iter().find(|h| h.name == name)
    }

    fn verified(&self, name: &str) -> bool {
        self.get(name).is_some_and(|h| h.status == HypothesisStatus::Verified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSetReport {
    pub primed: Option<Enumeration>,
    pub unprimed: Option<Enumeration>,
    /// Why sets are missing or unusable for a bound.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConclusionKind {
    Finite,
    TriviallyEmpty,
    NotEstablished,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub kind: ConclusionKind,
    /// A constant `C(B,K)` was computed from complete exceptional sets.
    pub effective: bool,
    #[serde(with = "crate::jsonint::option")]
    pub bound: Option<BigInt>,
    pub statement: String,
    /// `Some(true)` when `M^B(K)` is infinite and `B ⊗ K = M_2(K)`.
    pub infinitely_many_qm_surfaces: Option<bool>,
}

const TRIVIAL: &str = "empty for a trivial reason: there are no QM-abelian surfaces by O over K";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format_version: u32,
    pub tool: Tool,
    pub seed: u64,
    pub input: InputEcho,
    pub algebra: QuaternionAlgebra,
    pub assumptions: Vec<Assumption>,
    pub field_checks: VerificationReport,
    pub hypotheses: Hypotheses,
    pub moduli: Option<ModuliFlags>,
    pub exceptional_sets: ExceptionalSetReport,
    pub bound: Option<IrreducibilityBound>,
    pub gamma0: Option<Gamma0Report>,
    pub conclusion: Conclusion,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Internal(format!("serializing certificate: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            context: format!("certificate line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    /// Claims `A(K,2)_B` finite.
    pub fn is_finite(&self) -> bool {
        self.conclusion.kind == ConclusionKind::Finite
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs the full pipeline on a field file. Errors are reserved for malformed input and
/// broken invariants; failed hypotheses produce a certificate without a finiteness claim.
pub fn certify(d: u64, field_source: &str, opts: &CertifyOptions) -> Result<Certificate> {
    let spec = parse_field_source(field_source)?;
    let algebra = find_presentation(d)?;
    let mut cert = Certificate {
        format_version: FORMAT_VERSION,
        tool: Tool {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        seed: opts.seed,
        input: InputEcho {
            d,
            field_name: spec.name.clone(),
            field_sha256: sha256_hex(field_source.as_bytes()),
            automorphism_table_sha256: None,
        },
        algebra,
        assumptions: Vec::new(),
        field_checks: VerificationReport::default(),
        hypotheses: Hypotheses {
            checks: Vec::new(),
            hcf: None,
            auxiliary_prime: None,
        },
        moduli: None,
        exceptional_sets: ExceptionalSetReport {
            primed: None,
            unprimed: None,
            notes: Vec::new(),
        },
        bound: None,
        gamma0: None,
        conclusion: Conclusion {
            kind: ConclusionKind::NotEstablished,
            effective: false,
            bound: None,
            statement: String::new(),
            infinitely_many_qm_surfaces: None,
        },
    };
    run(&mut cert, spec, opts)?;
    Ok(cert)
}

fn not_established(cert: &mut Certificate, failed: &str) {
    cert.conclusion.kind = ConclusionKind::NotEstablished;
    cert.conclusion.statement = format!("no conclusion: hypothesis {failed} did not hold");
}

fn run(cert: &mut Certificate, spec: NumberFieldSpec, opts: &CertifyOptions) -> Result<()> {
    let hyp_names = ["galois", "real_place", "splits_over_k", "hcf", "auxiliary_prime"];
    let k = match NumberField::new(spec.clone()) {
        Ok(k) => k,
        Err(Error::Verification { check, detail }) => {
            cert.field_checks = verify_field_spec(&spec);
            cert.hypotheses
                .record("galois", HypothesisStatus::Failed, format!("[{check}] {detail}"));
            for name in &hyp_names[1..] {
                cert.hypotheses.record(name, HypothesisStatus::NotRun, "");
            }
            not_established(cert, "galois");
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    cert.field_checks = k.report().clone();
    let table = serde_json::to_vec(k.composition_table()).map_err(|e| Error::Internal(e.to_string()))?;
    cert.input.automorphism_table_sha256 = Some(sha256_hex(&table));
    cert.hypotheses.record(
        "galois",
        HypothesisStatus::Verified,
        format!("{} automorphisms closed under composition", k.automorphism_count()),
    );

    if k.class_number() > 1 {
        cert.assumptions.push(Assumption {
            name: "class_group_generators".into(),
            detail: "the listed prime ideals generate the class group".into(),
        });
    }
    for c in k.report().assumptions() {
        cert.assumptions.push(Assumption {
            name: c.name.clone(),
            detail: c.detail.clone(),
        });
    }

    let flags = moduli_flags(&cert.algebra, &k)?;
    cert.conclusion.infinitely_many_qm_surfaces = flags.infinitely_many_qm_surfaces;
    let trivial = flags.trivial_emptiness;
    cert.moduli = Some(flags);
    if trivial.real_place {
        cert.hypotheses
            .record("real_place", HypothesisStatus::Failed, "K has a real place");
    } else {
        cert.hypotheses
            .record("real_place", HypothesisStatus::Verified, "K is totally imaginary");
    }
    if trivial.nonsplit {
        cert.hypotheses
            .record("splits_over_k", HypothesisStatus::Failed, "B ⊗ K is a division algebra");
    } else {
        cert.hypotheses
            .record("splits_over_k", HypothesisStatus::Verified, "B ⊗ K = M_2(K)");
    }
    if trivial.holds() {
        for name in &hyp_names[3..] {
            cert.hypotheses.record(name, HypothesisStatus::NotRun, "");
        }
        cert.conclusion.kind = ConclusionKind::TriviallyEmpty;
        let why = if trivial.real_place {
            "K has a real place"
        } else {
            "B does not split over K"
        };
        cert.conclusion.statement = format!("{TRIVIAL} ({why})");
        return Ok(());
    }

    let hcf = hcf_containment_check(&k)?;
    let clear = hcf.is_clear();
    let detail = match &hcf {
        HcfVerdict::NoImagQuadSubfieldHasHcfInK { cleared } => {
            format!("{} imaginary quadratic subfields cleared", cleared.len())
        }
        HcfVerdict::ContainsHcf { m, reason, .. } => {
            format!("K contains the Hilbert class field of Q(sqrt({m})): {reason}")
        }
        HcfVerdict::Undetermined { m, reason, .. } => format!("undetermined for Q(sqrt({m})): {reason}"),
    };
    let status = if clear {
        HypothesisStatus::Verified
    } else {
        HypothesisStatus::Failed
    };
    cert.hypotheses.record("hcf", status, detail);
    cert.hypotheses.hcf = Some(hcf);
    if !clear {
        cert.hypotheses.record("auxiliary_prime", HypothesisStatus::NotRun, "");
        not_established(cert, "hcf");
        return Ok(());
    }

    let q = match find_minimal_q(&k, &cert.algebra, opts.q_ceiling, opts.seed) {
        Ok(q) => q,
        Err(Error::InvalidArgument(msg)) => {
            cert.hypotheses.record("auxiliary_prime", HypothesisStatus::Failed, msg);
            not_established(cert, "auxiliary_prime");
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    cert.hypotheses.record(
        "auxiliary_prime",
        HypothesisStatus::Verified,
        format!(
            "q = {} splits completely in K and {} splits in Q(sqrt(-{}))",
            q.q, q.splitting_prime_of_d, q.q
        ),
    );
    let qv = q.q;
    cert.hypotheses.auxiliary_prime = Some(q);
    if !hyp_names.iter().all(|h| cert.hypotheses.verified(h)) {
        return Err(Error::Internal(
            "finiteness reached with an unverified hypothesis".into(),
        ));
    }

    cert.conclusion.kind = ConclusionKind::Finite;
    if opts.exceptional_sets {
        exceptional_sets(cert, &k, qv, opts)?;
    } else {
        cert.exceptional_sets.notes.push("enumeration not requested".into());
    }
    cert.conclusion.effective = cert.bound.is_some();
    cert.conclusion.bound = cert.bound.as_ref().map(|b| b.constant.clone());
    cert.conclusion.statement = match &cert.bound {
        Some(b) => format!(
            "A(K,2)_B is finite; every prime p > C(B,K) = {} satisfies {}",
            b.constant, b.predicate
        ),
        None => "A(K,2)_B is finite; no effective constant C(B,K) was computed".into(),
    };
    Ok(())
}

fn exceptional_sets(cert: &mut Certificate, k: &NumberField, q: u64, opts: &CertifyOptions) -> Result<()> {
    let cd = match ClassData::from_field(k) {
        Ok(cd) => cd,
        Err(e) if !e.is_internal() => {
            cert.exceptional_sets.notes.push(format!("class data rejected: {e}"));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let eopts = EnumerationOptions {
        budget: opts.budget,
        support: opts.support.clone(),
        threads: opts.threads,
        factor: opts.factor.clone(),
    };
    let primed = build_exceptional_sets(k, &cd, Variant::Primed, &eopts)?;
    let unprimed = if opts.gamma0 {
        Some(build_exceptional_sets(k, &cd, Variant::Unprimed, &eopts)?)
    } else {
        None
    };
    let complete = |e: &Option<Enumeration>| match e {
        Some(Enumeration::Complete(s)) if s.is_exhaustive() => Some(s.clone()),
        _ => None,
    };
    let primed = Some(primed);
    match complete(&primed) {
        Some(p) => {
            let bound = assemble_irreducibility_bound(k, &cert.algebra, &p, q)?;
            if let Some(u) = complete(&unprimed) {
                cert.gamma0 = Some(assemble_gamma0_report(k, &cert.algebra, &p, &u, q)?);
            } else if unprimed.is_some() {
                cert.exceptional_sets
                    .notes
                    .push("unprimed sets incomplete; no Gamma_0(p) report".into());
            }
            if !p.complete_factorization() {
                cert.exceptional_sets.notes.push(format!(
                    "incomplete factorization: {} composite cofactors excluded whole",
                    p.unfactored.len()
                ));
            }
            cert.bound = Some(bound);
        }
        None => {
            let why = match &primed {
                Some(Enumeration::Infeasible(r)) => r.to_string(),
                _ => "restricted exponent support".to_string(),
            };
            cert.exceptional_sets.notes.push(format!("no bound: {why}"));
        }
    }
    cert.exceptional_sets.primed = primed;
    cert.exceptional_sets.unprimed = unprimed;
    Ok(())
}

/// Exit status for a CLI outcome: 0 certificate produced, 1 input error, 2 internal.
pub fn exit_code(r: &Result<Certificate>) -> i32 {
    match r {
        Ok(_) => 0,
        Err(e) if e.is_internal() => 2,
        Err(_) => 1,
    }
}
