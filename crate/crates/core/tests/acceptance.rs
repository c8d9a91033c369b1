//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

mod common;

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::suites::{self, Outcome};
use qmcert::boundsets::ClassData;
use qmcert::certify::{certify, find_minimal_q, replay_paper_examples, Certificate, CertifyOptions, ConclusionKind};
use qmcert::numfield::{bundled, NumberField};
use qmcert::polyarith::primes_up_to;
use qmcert::quaternion::{congruence_classes_nonsplit, find_presentation};
use qmcert::shimura::conic_model;

const CONGRUENCE_LIMIT: Duration = Duration::from_secs(5);
const LOCAL_POINTS_LIMIT: Duration = Duration::from_secs(10);
const EFG_LIMIT: Duration = Duration::from_secs(5);
const REPLAY_LIMIT: Duration = Duration::from_secs(60);
const DESK_SCALE_LIMIT: Duration = Duration::from_secs(600);
const REFUSAL_LIMIT: Duration = Duration::from_secs(1);
const PROPERTY_LIMIT: Duration = Duration::from_secs(300);
const SCHEMA_LIMIT: Duration = Duration::from_secs(600);

/// `B ⊗ Q(sqrt(-q))` is not split iff `q mod M` is listed.
const NONSPLIT: &[(u64, u64, &[u64])] = &[
    (6, 24, &[2, 5, 7, 11, 17, 23]),
    (10, 40, &[1, 7, 9, 11, 19, 21, 23, 29, 31, 39]),
    (
        22,
        88,
        &[
            2, 7, 13, 15, 17, 19, 21, 23, 29, 31, 35, 39, 41, 43, 47, 51, 57, 61, 63, 65, 71, 73, 79, 83, 85, 87,
        ],
    ),
];

/// `q` splits completely iff `q mod M` is listed.
const SPLITTING: &[(&str, u64, &[u64])] = &[
    ("q_sqrt3_sqrt_m5", 60, &[1, 23, 47, 49]),
    ("q_zeta5", 5, &[1]),
    ("q_zeta17", 17, &[1]),
];

const EFG: &[(&str, u64, (u32, u32, usize))] = &[
    ("q_sqrt3_sqrt_m5", 3, (2, 1, 2)),
    ("q_sqrt3_sqrt_m5", 2, (2, 1, 2)),
    ("q_sqrt3_sqrt_m5", 11, (1, 2, 2)),
    ("q_sqrt3_sqrt_m5", 5, (2, 2, 1)),
    ("q_zeta5", 3, (1, 4, 1)),
    ("q_zeta5", 2, (1, 4, 1)),
    ("q_zeta5", 11, (1, 1, 4)),
    ("q_zeta5", 5, (4, 1, 1)),
    ("q_zeta17", 3, (1, 16, 1)),
    ("q_zeta17", 2, (1, 8, 2)),
    ("q_zeta17", 11, (1, 16, 1)),
    ("q_zeta17", 5, (1, 16, 1)),
];

fn congruences() -> Outcome {
    for &(d, m, residues) in NONSPLIT {
        let (om, or) = congruence_classes_nonsplit(d).map_err(|e| e.to_string())?;
        if om != m || or != residues {
            return Err(format!("d = {d}: {or:?} mod {om}"));
        }
    }
    let primes = primes_up_to(10_000);
    for &(key, m, residues) in SPLITTING {
        let k = bundled::field(key).map_err(|e| e.to_string())?;
        for &q in &primes {
            let split = k.splits_completely(q).map_err(|e| e.to_string())?;
            if split != residues.contains(&(q % m)) {
                return Err(format!("{key}: q = {q} gives split = {split}"));
            }
        }
    }
    Ok(format!(
        "3 nonsplit lists, 3 splitting criteria over {} primes",
        primes.len()
    ))
}

fn local_points() -> Outcome {
    for (d, p) in [(6, 3), (10, 2), (22, 11)] {
        let model = conic_model(d).map_err(|e| e.to_string())?;
        let obstructed = model.obstructed_primes(1000);
        if obstructed != [p] {
            return Err(format!("d = {d}: empty at {obstructed:?}"));
        }
    }
    suites::hilbert_brute_force(50).map(|s| format!("obstructions at 3, 2, 11; {s}"))
}

fn efg() -> Outcome {
    let mut fields = std::collections::BTreeMap::new();
    for &(key, p, want) in EFG {
        if !fields.contains_key(key) {
            fields.insert(key, bundled::field(key).map_err(|e| e.to_string())?);
        }
        let sd = fields[key].splitting_data(p).map_err(|e| e.to_string())?;
        if sd.efg() != Some(want) {
            return Err(format!("{key}, p = {p}: {:?}", sd.factors));
        }
    }
    Ok(format!("{} triples", EFG.len()))
}

/// Least prime in both congruence lists, by scanning primes.
fn least_in_both(key: &str, d: u64) -> u64 {
    let (_, mk, rk) = SPLITTING.iter().find(|(k, _, _)| *k == key).unwrap();
    let (_, md, rd) = NONSPLIT.iter().find(|(x, _, _)| *x == d).unwrap();
    primes_up_to(100_000)
        .into_iter()
        .find(|q| rk.contains(&(q % mk)) && rd.contains(&(q % md)))
        .unwrap()
}

fn replay() -> Outcome {
    let table = replay_paper_examples().map_err(|e| e.to_string())?;
    if let Some(c) = table.iter().find(|c| !c.pass) {
        return Err(format!(
            "{} / {}: expected {}, observed {}",
            c.group, c.name, c.expected, c.observed
        ));
    }
    let certs: Vec<_> = table.iter().filter(|c| c.group == "certificate").collect();
    let finite = certs
        .iter()
        .filter(|c| c.observed.starts_with("Finite Some(true)"))
        .count();
    let empty = certs
        .iter()
        .filter(|c| c.observed.starts_with("TriviallyEmpty"))
        .count();
    if (finite, empty) != (8, 1) {
        return Err(format!("{finite} finite, {empty} trivially empty"));
    }
    for (d, key, want) in [(6, "q_zeta5", 11), (10, "q_zeta5", 11), (6, "q_sqrt3_sqrt_m5", 23)] {
        let oracle = least_in_both(key, d);
        let k = bundled::field(key).map_err(|e| e.to_string())?;
        let b = find_presentation(d).map_err(|e| e.to_string())?;
        let found = find_minimal_q(&k, &b, 1_000_000, 0).map_err(|e| e.to_string())?.q;
        if (oracle, found) != (want, want) {
            return Err(format!(
                "d = {d}, {key}: lists give {oracle}, search gives {found}, expected {want}"
            ));
        }
    }
    Ok(format!(
        "{} checks, 8 finite + 1 trivially empty, minimal q 11, 11, 23",
        table.len()
    ))
}

fn desk_scale() -> Outcome {
    let a = suites::desk_rationals()?;
    let b = suites::desk_sqrt_m5()?;
    let c = suites::certificate_determinism(10, "q_sqrt_m5")?;
    Ok(format!("{a} | {b} | {c}"))
}

static ZETA17: OnceLock<(NumberField, ClassData)> = OnceLock::new();

/// Only the refusal is timed; the field is built beforehand.
fn refusal() -> Outcome {
    let (k, cd) = ZETA17.get().ok_or("Q(zeta_17) was not prepared")?;
    suites::zeta17_refusal(k, cd)
}

fn properties() -> Outcome {
    let mut parts = vec![suites::hilbert_product_formula(2000)?, suites::jacobi_vs_squares(200)?];
    for key in suites::BUNDLED {
        parts.push(suites::norm_multiplicativity(key, 500)?);
    }
    parts.push(suites::ideal_norm_multiplicativity("q_sqrt3_sqrt_m5", 100)?);
    parts.push(suites::local_degree_sums(100)?);
    parts.push(suites::class_numbers(2000)?);
    parts.push(suites::weil_bounds(100, 48)?);
    Ok(parts.join("; "))
}

fn schema() -> Outcome {
    let schema = common::certificate_schema();
    let mut out = Vec::new();
    for key in ["q_sqrt3_sqrt_m5", "q_zeta5", "q_zeta17"] {
        let c = certify(
            6,
            bundled::source(key).map_err(|e| e.to_string())?,
            &CertifyOptions::default(),
        )
        .map_err(|e| e.to_string())?;
        let text = c.to_json().map_err(|e| e.to_string())?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let errors = common::schema_errors(&schema, &value);
        if !errors.is_empty() {
            return Err(format!("{key}: {}", errors.join("; ")));
        }
        let back = Certificate::from_json(&text).map_err(|e| e.to_string())?;
        if back != c || back.to_json().map_err(|e| e.to_string())? != text {
            return Err(format!("{key}: round trip is lossy"));
        }
        if c.conclusion.kind != ConclusionKind::Finite {
            return Err(format!("{key}: {:?}", c.conclusion.kind));
        }
        out.push(format!("{key} {} KB", text.len() / 1024));
    }
    Ok(out.join(", "))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "congruence reproduction",
        limit: CONGRUENCE_LIMIT,
        run: congruences,
    },
    Criterion {
        id: 2,
        name: "local-points table",
        limit: LOCAL_POINTS_LIMIT,
        run: local_points,
    },
    Criterion {
        id: 3,
        name: "(e, f, g) table",
        limit: EFG_LIMIT,
        run: efg,
    },
    Criterion {
        id: 4,
        name: "worked-example replay",
        limit: REPLAY_LIMIT,
        run: replay,
    },
    Criterion {
        id: 5,
        name: "desk-scale exceptional sets",
        limit: DESK_SCALE_LIMIT,
        run: desk_scale,
    },
    Criterion {
        id: 6,
        name: "budget gate",
        limit: REFUSAL_LIMIT,
        run: refusal,
    },
    Criterion {
        id: 7,
        name: "property suites",
        limit: PROPERTY_LIMIT,
        run: properties,
    },
    Criterion {
        id: 8,
        name: "certificate schema and round trip",
        limit: SCHEMA_LIMIT,
        run: schema,
    },
];

fn main() -> ExitCode {
    match suites::zeta17() {
        Ok(prepared) => {
            let _ = ZETA17.set(prepared);
        }
        Err(e) => println!("could not build Q(zeta_17): {e}"),
    }
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (6, Ok(refused), Some((k, cd))) = (c.id, &outcome, ZETA17.get()) {
            // the bounded subset only has to finish
            outcome = suites::zeta17_bounded_subset(k, cd).map(|s| format!("{refused} | {s}"));
        }
        let (status, detail) = match outcome {
            Ok(_) if elapsed > c.limit => ("FAIL", "exceeded the time limit".to_string()),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {}. {} ({:.2}s, limit {}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
