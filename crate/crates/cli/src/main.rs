use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use qmcert::certify::{certify, replay_paper_examples, CertifyOptions};
use qmcert::numfield::{bundled, NumberField};
use qmcert::quadforms::{class_number_imag, reduced_forms};
use qmcert::quaternion::{congruence_classes_nonsplit, hilbert_symbol_int, Place};
use qmcert::shimura::conic_model;
use qmcert::Error;

#[derive(Parser)]
#[command(name = "qmcert", version, about = "Finiteness certificates for QM-abelian surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every hypothesis check and emit a certificate for (d, K).
    Certify {
        #[arg(short = 'd')]
        d: u64,
        /// Field file (TOML or JSON), or the name of a bundled field.
        #[arg(short = 'K')]
        field: String,
        /// Also build the unprimed sets and the Gamma_0(p) report.
        #[arg(long)]
        gamma0: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        /// Restrict the exponent vectors to these automorphism indices.
        #[arg(long, value_delimiter = ',')]
        support: Option<Vec<usize>>,
        #[arg(long)]
        q_ceiling: Option<u64>,
        /// Report hypotheses only.
        #[arg(long)]
        no_sets: bool,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// (e_i, f_i) of the primes above p.
    Splitting {
        #[arg(short = 'K')]
        field: String,
        #[arg(short = 'p')]
        p: u64,
    },
    /// Hilbert symbol (a, b)_v.
    Hilbert {
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: BigInt,
        #[arg(short = 'b', allow_hyphen_values = true)]
        b: BigInt,
        /// A prime or `inf`.
        #[arg(short = 'v')]
        v: Place,
    },
    /// Whether the conic model of M^B has Q_p-points.
    ShimuraLocal {
        #[arg(short = 'd')]
        d: u64,
        #[arg(short = 'p')]
        p: u64,
        /// Also report the completions of this field above p.
        #[arg(short = 'K')]
        field: Option<String>,
    },
    /// Class number of a negative discriminant by reduced forms.
    Classnum {
        #[arg(short = 'D', allow_hyphen_values = true)]
        disc: i64,
    },
    /// Residues q mod M for which B ⊗ Q(sqrt(-q)) is not split.
    Congruences {
        #[arg(short = 'd')]
        d: u64,
    },
    /// Check the worked examples against their published values.
    ReplayPaper,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn field_source(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{arg}: {e}")));
    }
    bundled::source(arg)
        .map(str::to_string)
        .map_err(|_| Failure::Input(format!("{arg}: no such file or bundled field")))
}

fn load_field(arg: &str) -> Result<NumberField, Failure> {
    let spec = qmcert::certify::parse_field_source(&field_source(arg)?)?;
    Ok(NumberField::new(spec)?)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Internal(e.to_string())),
        _ => Ok(()),
    }
}

fn print(v: &Value) -> Result<(), Failure> {
    emit(&serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?)
}

fn run(cmd: Command) -> Result<bool, Failure> {
    match cmd {
        Command::Certify {
            d,
            field,
            gamma0,
            budget,
            seed,
            threads,
            support,
            q_ceiling,
            no_sets,
            output,
        } => {
            let mut opts = CertifyOptions {
                gamma0,
                exceptional_sets: !no_sets,
                threads,
                support,
                ..Default::default()
            };
            if let Some(b) = budget {
                opts.budget = b;
            }
            if let Some(s) = seed {
                opts.seed = s;
            }
            if let Some(c) = q_ceiling {
                opts.q_ceiling = c;
            }
            let cert = certify(d, &field_source(&field)?, &opts)?;
            let text = cert.to_json()?;
            match output {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
                None => emit(&text)?,
            }
            Ok(true)
        }
        Command::Splitting { field, p } => {
            let k = load_field(&field)?;
            let sd = k.splitting_data(p)?;
            let mut v = serde_json::to_value(&sd).map_err(|e| Failure::Internal(e.to_string()))?;
            v["efg"] = json!(sd.efg());
            v["field"] = json!(k.name());
            print(&v)?;
            Ok(true)
        }
        Command::Hilbert { a, b, v } => {
            let s = hilbert_symbol_int(&a, &b, v)?;
            print(&json!({ "a": a.to_string(), "b": b.to_string(), "place": v.to_string(), "symbol": s }))?;
            Ok(true)
        }
        Command::ShimuraLocal { d, p, field } => {
            let model = conic_model(d).map_err(|e| Failure::Input(e.to_string()))?;
            let mut v = json!({
                "d": d,
                "p": p,
                "conic": format!("x^2 + y^2 + {} = 0", model.m),
                "local_points_qp": model.local_points_qp(p)?,
            });
            if let Some(f) = field {
                let k = load_field(&f)?;
                v["field"] = json!(k.name());
                v["local_points_kv"] = json!(model.local_points_kv(&k, p)?);
            }
            print(&v)?;
            Ok(true)
        }
        Command::Classnum { disc } => {
            let h = class_number_imag(disc)?;
            let forms: Vec<[i64; 3]> = reduced_forms(disc).iter().map(|f| [f.a, f.b, f.c]).collect();
            print(&json!({ "discriminant": disc, "class_number": h, "reduced_forms": forms }))?;
            Ok(true)
        }
        Command::Congruences { d } => {
            let (m, residues) = congruence_classes_nonsplit(d)?;
            print(&json!({ "d": d, "modulus": m, "residues": residues }))?;
            Ok(true)
        }
        Command::ReplayPaper => {
            let table = replay_paper_examples()?;
            let passed = table.iter().all(|c| c.pass);
            let failed = table.iter().filter(|c| !c.pass).count();
            print(&json!({ "checks": table, "total": table.len(), "failed": failed }))?;
            Ok(passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
