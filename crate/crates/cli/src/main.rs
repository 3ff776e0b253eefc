use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use circuit_count::bounds::{audit, theorem_bounds};
use circuit_count::counting::{enumerate_real_solutions, real_count, SolutionCount};
use circuit_count::eliminant;
use circuit_count::io::{format_rational, CircuitFile, SystemFile};
use circuit_count::witness::{witness_general, witness_positive, witness_real, SearchOptions, WitnessSystem};
use circuit_count::{CircuitSystem, Error, ErrorKind, RatPoly, Rational};

const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "circuit-count", version, about = "Exact real and positive solution counts for circuit systems")]
struct Cli {
    /// Add wall-clock timing to the report (makes it non-reproducible)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relation, m(C), rank mod 2, volume and normalization of a circuit
    Analyze { circuit: PathBuf },
    /// P, Q, f, H and h as coefficient lists
    Eliminant { system: PathBuf },
    /// Count positive and real solutions
    Count {
        system: PathBuf,
        /// Report only the positive count
        #[arg(long)]
        positive: bool,
    },
    /// Enumerate real solutions numerically
    Solve {
        system: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// Sharp bounds for given n, m and R
    Bounds { n: usize, m: usize, r: usize },
    /// Construct a system attaining a sharp bound
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long = "R", default_value_t = 0)]
        r: usize,
        #[arg(long)]
        positive: bool,
        /// Search budget in seconds
        #[arg(long, default_value_t = 120.0)]
        budget: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the system file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a system against every bound and the numerical oracle
    Verify {
        system: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Parse => 2,
            ErrorKind::Invalid => 3,
            ErrorKind::NonGeneric => 4,
            ErrorKind::Budget => 5,
            ErrorKind::Internal => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

struct Outcome {
    inputs: Value,
    digest: Vec<u8>,
    results: Value,
    warnings: Vec<String>,
    success: bool,
}

impl Outcome {
    fn new(inputs: Value, digest: Vec<u8>, results: Value) -> Outcome {
        Outcome { inputs, digest, results, warnings: Vec::new(), success: true }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 2, message: format!("cannot read {}: {e}", path.display()) })
}

fn rat(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

fn poly(p: &RatPoly) -> Value {
    Value::Array(p.coeffs().iter().map(rat).collect())
}

fn load_system(path: &Path) -> Result<(CircuitSystem, String), Failure> {
    let text = read(path)?;
    let sys = SystemFile::parse(&text)?.to_system()?;
    Ok((sys, text))
}

fn count_json(c: &SolutionCount) -> Value {
    let roots: Vec<Value> = c
        .roots
        .iter()
        .map(|r| {
            json!({
                "interval": [rat(&r.lo), rat(&r.hi)],
                "multiplicity": r.multiplicity,
                "sign": r.sign,
                "g_signs": r.g_signs,
                "c_signs": r.c_signs,
                "positive_conditions": r.positive,
                "real_conditions": r.real,
            })
        })
        .collect();
    json!({
        "positive": c.positive,
        "real": c.real,
        "multiplier": c.multiplier,
        "qualifying_roots": c.qualifying_roots,
        "complex": c.complex.to_string(),
        "non_generic": c.non_generic,
        "roots": roots,
    })
}

fn analyze(path: &Path) -> Result<Outcome, Failure> {
    let text = read(path)?;
    let circuit = CircuitFile::parse(&text)?.to_circuit()?;
    let normal = circuit.normalize();
    let rel = normal.primitive_relation()?;
    let z = normal.normalization().expect("normalize records its transform");
    let basis: Vec<Vec<String>> = (0..z.basis_change.rows())
        .map(|i| (0..z.basis_change.cols()).map(|j| z.basis_change[(i, j)].to_string()).collect())
        .collect();
    let results = json!({
        "n": circuit.n(),
        "ell": z.ell,
        "relation": {
            "lambda0": rel.lambda0,
            "lambdas": rel.lambdas,
            "t": rel.t,
            "nu": rel.nu,
            "delta": rel.delta,
        },
        "relation_on_points": circuit.relation_on_points(),
        "m": circuit.m(),
        "rank_mod2": circuit.rank_mod2(),
        "volume": circuit.normalized_volume().to_string(),
        "normalization": {
            "translation": z.translation,
            "basis_change": basis,
            "order": z.order,
            "points": normal.points(),
        },
    });
    Ok(Outcome::new(json!({"circuit": path.display().to_string()}), text.into_bytes(), results))
}

fn cmd_eliminant(path: &Path) -> Result<Outcome, Failure> {
    let (sys, text) = load_system(path)?;
    let e = eliminant::build(&sys)?;
    let results = json!({
        "ell": sys.ell(),
        "P": poly(&e.p),
        "Q": poly(&e.q),
        "f": poly(&e.f),
        "H": poly(&e.big_h),
        "h": poly(&e.h),
    });
    Ok(Outcome::new(json!({"system": path.display().to_string()}), text.into_bytes(), results))
}

fn count(path: &Path, positive: bool) -> Result<Outcome, Failure> {
    let (sys, text) = load_system(path)?;
    let c = real_count(&sys)?;
    let results = if positive { json!({"positive": c.positive}) } else { count_json(&c) };
    let mut out = Outcome::new(json!({"system": path.display().to_string(), "positive": positive}), text.into_bytes(), results);
    out.warnings = c.warnings;
    Ok(out)
}

fn solve(path: &Path, eps: f64) -> Result<Outcome, Failure> {
    let (sys, text) = load_system(path)?;
    let sols = enumerate_real_solutions(&sys, eps)?;
    let list: Vec<Value> = sols
        .iter()
        .map(|s| json!({"coords": s.coords, "signs": s.signs, "log_abs": s.log_abs, "root": s.root, "residual": s.residual}))
        .collect();
    let results = json!({"count": sols.len(), "solutions": list});
    Ok(Outcome::new(json!({"system": path.display().to_string(), "eps": eps}), text.into_bytes(), results))
}

fn bounds(n: usize, m: usize, r: usize) -> Result<Outcome, Failure> {
    let (positive, real) = theorem_bounds(n, m, r)?;
    let inputs = json!({"n": n, "m": m, "R": r});
    let digest = inputs.to_string().into_bytes();
    Ok(Outcome::new(inputs, digest, json!({"positive_bound": positive, "real_bound": real})))
}

fn witness_json(w: &WitnessSystem) -> Value {
    json!({
        "kind": format!("{:?}", w.kind).to_lowercase(),
        "n": w.n,
        "m": w.m,
        "R": w.r,
        "claimed": w.claimed_count,
        "measured": w.measured_count,
        "provenance": w.provenance,
        "scheme": w.scheme.as_ref().map(ToString::to_string),
    })
}

#[allow(clippy::too_many_arguments)]
fn witness(n: usize, m: Option<usize>, r: usize, positive: bool, budget: f64, seed: u64, out: Option<&Path>) -> Result<Outcome, Failure> {
    if !(budget.is_finite() && budget >= 0.0) {
        return Err(Error::Domain(format!("budget must be a nonnegative number of seconds, got {budget}")).into());
    }
    let seed = match std::env::var("CIRCUIT_COUNT_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| Failure { code: 2, message: format!("CIRCUIT_COUNT_SEED is not an integer: {s:?}") })?,
        Err(_) => seed,
    };
    let opts = SearchOptions { budget: Duration::from_secs_f64(budget), seed };
    let m = m.unwrap_or(n);
    let w = if m == n && positive {
        witness_positive(n, &opts)?
    } else if m == n {
        witness_real(n, r, &opts)?
    } else {
        witness_general(n, m, r, positive, &opts)?
    };
    let file = SystemFile::reduced(&w.points, &w.gs);
    if let Some(path) = out {
        fs::write(path, file.to_json() + "\n")
            .map_err(|e| Failure { code: 1, message: format!("cannot write {}: {e}", path.display()) })?;
    }
    let inputs = json!({"n": n, "m": m, "R": r, "positive": positive, "seed": seed});
    let digest = inputs.to_string().into_bytes();
    let mut results = witness_json(&w);
    results["system"] = serde_json::to_value(&file).expect("plain data serializes");
    let mut outcome = Outcome::new(inputs, digest, results);
    outcome.success = w.measured_count == w.claimed_count;
    Ok(outcome)
}

fn verify(path: &Path, eps: f64) -> Result<Outcome, Failure> {
    let (sys, text) = load_system(path)?;
    let report = audit(&sys)?;
    let sols = enumerate_real_solutions(&sys, eps)?;
    let worst = sols.iter().map(|s| s.residual).fold(0.0, f64::max);
    let oracle_agrees = sols.len() as u64 == report.counts.real && worst < RESIDUAL_TOLERANCE;
    let verdicts: Vec<Value> = report
        .verdicts
        .iter()
        .map(|v| json!({"name": v.name, "value": v.value.to_string(), "bound": v.bound.to_string(), "satisfied": v.satisfied, "sharp": v.sharp}))
        .collect();
    let results = json!({
        "n": report.n,
        "m": report.m,
        "R": report.r,
        "volume": report.volume.to_string(),
        "positive_bound": report.positive_bound,
        "real_bound": report.real_bound,
        "khovanskii": report.khovanskii.to_string(),
        "positive": report.counts.positive,
        "real": report.counts.real,
        "verdicts": verdicts,
        "oracle": {"solutions": sols.len(), "max_residual": worst, "agrees": oracle_agrees},
    });
    let mut out = Outcome::new(json!({"system": path.display().to_string(), "eps": eps}), text.into_bytes(), results);
    out.warnings = report.counts.warnings.clone();
    out.success = report.all_satisfied() && oracle_agrees;
    Ok(out)
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::Eliminant { .. } => "eliminant",
        Command::Count { .. } => "count",
        Command::Solve { .. } => "solve",
        Command::Bounds { .. } => "bounds",
        Command::Witness { .. } => "witness",
        Command::Verify { .. } => "verify",
    }
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Analyze { circuit } => analyze(circuit),
        Command::Eliminant { system } => cmd_eliminant(system),
        Command::Count { system, positive } => count(system, *positive),
        Command::Solve { system, eps } => solve(system, *eps),
        Command::Bounds { n, m, r } => bounds(*n, *m, *r),
        Command::Witness { n, m, r, positive, budget, seed, out } => {
            witness(*n, *m, *r, *positive, *budget, *seed, out.as_deref())
        }
        Command::Verify { system, eps } => verify(system, *eps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli.command) {
        Ok(out) => {
            let digest: String = Sha256::digest(&out.digest).iter().map(|b| format!("{b:02x}")).collect();
            let mut report = json!({
                "command": name(&cli.command),
                "inputs": out.inputs,
                "inputs_digest": format!("sha256:{digest}"),
                "results": out.results,
                "warnings": out.warnings,
            });
            if cli.timing {
                report["timing_seconds"] = json!(start.elapsed().as_secs_f64());
            }
            let text = serde_json::to_string_pretty(&report).expect("plain data serializes");
            if writeln!(std::io::stdout(), "{text}").is_err() {
                return ExitCode::from(1);
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
