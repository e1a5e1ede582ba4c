//! Command-line front end: normal forms, coset streams, formula evaluation,
//! brute-force actions, and the verification suites.
//!
//! Exit codes: 0 success / all checks passed, 1 hard verification mismatch,
//! 2 invalid input.

use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use symhecke::combinatorics::{enum_paired_diagrams, enum_paired_tuples, enum_tableaux};
use symhecke::cosets::{coset_count, enum_family, MuFamily};
use symhecke::coweight::{dominant_coweight, reduce_witness, symmetric_coweight_with};
use symhecke::engine::{h_bruteforce, verify_suite};
use symhecke::error::Error;
use symhecke::formulas::{
    h_compute1, h_computen, h_corollary, h_dual1, h_mainthm, h_young, p_dual,
};
use symhecke::matrix::LMatrix;
use symhecke::qpoly::QPoly;
use symhecke::shapes::SymCoweight;
use symhecke::PrimeField;

#[derive(Parser)]
#[command(
    name = "symhecke",
    version,
    about = "Exact normal forms and Hecke-module structure constants over k((z))"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Odd prime field size
    #[arg(long, global = true, default_value_t = 3)]
    prime: u64,
    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Working precision override for reductions
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Worker cap (also honors SYMHECKE_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit machine-readable JSON
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (count tables only)
    #[arg(long, global = true)]
    csv: bool,
    /// Write primary output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Coweight invariants of a matrix
    Coweight {
        #[command(subcommand)]
        sub: CoweightCmd,
    },
    /// Coset representative families
    Cosets {
        #[command(subcommand)]
        sub: CosetsCmd,
    },
    /// Structure constants: brute force, formulas, verification
    Hecke {
        #[command(subcommand)]
        sub: HeckeCmd,
    },
}

#[derive(Args)]
struct MatrixArg {
    /// Path to a matrix JSON file {"p":..,"dim":..,"entries":[[i,j,[[e,c],..]],..]}
    #[arg(long)]
    matrix: std::path::PathBuf,
}

#[derive(Subcommand)]
enum CoweightCmd {
    /// Dominant coweight rho from the Cartan decomposition
    Rho(MatrixArg),
    /// Symmetric coweight sigma of the double coset K B H
    Sigma(MatrixArg),
    /// Full reduction witness g B h = Lambda
    Reduce(MatrixArg),
}

#[derive(Subcommand)]
enum CosetsCmd {
    /// Stream representatives as JSON lines
    Enum {
        #[arg(long)]
        dim: usize,
        /// "1^l" (vertical) or "l" (horizontal); leading '-' accepted
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Symbolic representative count
    Count {
        #[arg(long)]
        dim: usize,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
}

#[derive(Subcommand)]
enum HeckeCmd {
    /// Exhaustive sigma tally of a mu family acting on Pi^nu
    Brute {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// padded partition "3,0" or block shorthand "blocks=3;z=0;one=0"
        #[arg(long)]
        nu: String,
        /// report only this outcome
        #[arg(long)]
        lambda: Option<String>,
        /// allow representative counts beyond the budget guard
        #[arg(long)]
        force: bool,
    },
    /// Closed-formula evaluation
    Formula {
        #[arg(long)]
        rule: String,
        /// repeated key=value parameters (shapes as comma lists)
        #[arg(long = "param")]
        params: Vec<String>,
        /// also evaluate at q = q0
        #[arg(long)]
        at: Option<i64>,
        /// dump the enumerated tuples/diagrams/tableaux as JSON
        #[arg(long)]
        dump_witnesses: bool,
    },
    /// Run a verification suite and write the report
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
}

fn threads_from(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| {
            std::env::var("SYMHECKE_THREADS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1)
}

fn load_matrix(path: &std::path::Path) -> Result<LMatrix, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!(
            "{}: line {} column {}: {}",
            path.display(),
            e.line(),
            e.column(),
            e
        ))
    })?;
    LMatrix::from_json(&value)
}

fn emit(cli: &Cli, text: String) -> Result<(), Error> {
    match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e))),
        None => {
            println!("{}", text);
            Ok(())
        }
    }
}

fn param_map(params: &[String]) -> Result<BTreeMap<String, String>, Error> {
    let mut map = BTreeMap::new();
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{}'", p)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn need_int(map: &BTreeMap<String, String>, key: &str) -> Result<i64, Error> {
    map.get(key)
        .ok_or_else(|| Error::Parse(format!("missing parameter '{}'", key)))?
        .parse()
        .map_err(|e: std::num::ParseIntError| Error::Parse(format!("{}: {}", key, e)))
}

fn need_shape(map: &BTreeMap<String, String>, key: &str) -> Result<SymCoweight, Error> {
    SymCoweight::parse(
        map.get(key)
            .ok_or_else(|| Error::Parse(format!("missing parameter '{}'", key)))?,
    )
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let field = PrimeField::new(cli.prime)?;
    let threads = threads_from(cli);
    match &cli.command {
        Command::Coweight { sub } => match sub {
            CoweightCmd::Rho(arg) => {
                let m = load_matrix(&arg.matrix)?;
                let rho = dominant_coweight(&m)?;
                if cli.json {
                    emit(cli, serde_json::json!({ "rho": rho.parts() }).to_string())?;
                } else {
                    emit(cli, format!("rho: {}", rho))?;
                }
                Ok(0)
            }
            CoweightCmd::Sigma(arg) => {
                let m = load_matrix(&arg.matrix)?;
                let sigma = symmetric_coweight_with(&m, cli.precision)?;
                if cli.json {
                    emit(
                        cli,
                        serde_json::json!({
                            "blocks": sigma.big_parts(),
                            "z": sigma.count_z(),
                            "one": sigma.count_one(),
                            "padded": sigma.padded(),
                        })
                        .to_string(),
                    )?;
                } else {
                    emit(
                        cli,
                        format!(
                            "sigma blocks: {:?}; z: {}; one: {}; padded: {}",
                            sigma.big_parts(),
                            sigma.count_z(),
                            sigma.count_one(),
                            sigma
                        ),
                    )?;
                }
                Ok(0)
            }
            CoweightCmd::Reduce(arg) => {
                let m = load_matrix(&arg.matrix)?;
                let w = reduce_witness(&m, cli.precision)?;
                if !w.validate(&m) {
                    return Err(Error::InvariantMismatch(
                        "witness failed validation".into(),
                    ));
                }
                emit(
                    cli,
                    serde_json::json!({
                        "sigma": w.sigma.padded(),
                        "lambda": w.lambda.to_json(),
                        "precision": w.precision,
                        "witness_valid": true,
                    })
                    .to_string(),
                )?;
                Ok(0)
            }
        },
        Command::Cosets { sub } => match sub {
            CosetsCmd::Enum { dim, mu, limit } => {
                let mu = MuFamily::parse(mu)?;
                let family = enum_family(*dim, mu, field)?;
                let mut lines = Vec::new();
                for rep in family.reps.iter().take(limit.unwrap_or(usize::MAX)) {
                    lines.push(rep.to_json().to_string());
                }
                emit(cli, lines.join("\n"))?;
                Ok(0)
            }
            CosetsCmd::Count { dim, mu } => {
                let mu = MuFamily::parse(mu)?;
                let count = coset_count(*dim, mu);
                if cli.json {
                    emit(
                        cli,
                        serde_json::json!({
                            "count": count.to_json(),
                            "at_p": count.eval(field.modulus() as i64).to_string(),
                        })
                        .to_string(),
                    )?;
                } else {
                    emit(
                        cli,
                        format!(
                            "{} ({} at q={})",
                            count,
                            count.eval(field.modulus() as i64),
                            field.modulus()
                        ),
                    )?;
                }
                Ok(0)
            }
        },
        Command::Hecke { sub } => match sub {
            HeckeCmd::Brute {
                mu,
                nu,
                lambda,
                force,
            } => {
                let mu = MuFamily::parse(mu)?;
                let nu = SymCoweight::parse(nu)?;
                let hv = h_bruteforce(field, mu, &nu, threads, *force)?;
                if let Some(lam) = lambda {
                    let lam = SymCoweight::parse(lam)?;
                    emit(cli, hv.get(&lam).to_string())?;
                } else if cli.csv {
                    let mut rows = vec!["lambda,count".to_string()];
                    for (lam, c) in &hv.counts {
                        rows.push(format!("\"{}\",{}", lam, c));
                    }
                    emit(cli, rows.join("\n"))?;
                } else if cli.json {
                    emit(cli, serde_json::to_string_pretty(&hv).unwrap())?;
                } else {
                    let mut rows = Vec::new();
                    for (lam, c) in &hv.counts {
                        rows.push(format!("{}: {}", lam, c));
                    }
                    rows.push(format!("total: {}", hv.total()));
                    emit(cli, rows.join("\n"))?;
                }
                Ok(0)
            }
            HeckeCmd::Formula {
                rule,
                params,
                at,
                dump_witnesses,
            } => {
                let map = param_map(params)?;
                let poly = eval_formula(rule, &map, *dump_witnesses)?;
                let mut payload = serde_json::json!({
                    "rule": rule,
                    "poly": poly.to_json(),
                    "display": poly.to_string(),
                });
                if let Some(q0) = at {
                    payload["at"] =
                        serde_json::json!({ "q": q0, "value": poly.eval(*q0).to_string() });
                }
                emit(cli, serde_json::to_string_pretty(&payload).unwrap())?;
                Ok(0)
            }
            HeckeCmd::Verify { suite, trials } => {
                let report = verify_suite(suite, field, cli.seed, *trials, threads)?;
                let json = report.to_json_string();
                match &cli.out {
                    Some(path) => std::fs::write(path, json.as_bytes())
                        .map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?,
                    None => println!("{}", json),
                }
                eprintln!(
                    "suite {}: {} cases, {} passed, {} failed, {} findings",
                    report.suite,
                    report.summary.total,
                    report.summary.passed,
                    report.summary.failed,
                    report.summary.findings
                );
                Ok(if report.all_passed() { 0 } else { 1 })
            }
        },
    }
}

fn eval_formula(
    rule: &str,
    map: &BTreeMap<String, String>,
    dump: bool,
) -> Result<QPoly, Error> {
    match rule {
        "computen" => Ok(h_computen(
            need_int(map, "n")?,
            need_int(map, "i")?,
            need_int(map, "j")?,
            need_int(map, "k")?,
        )),
        "compute1" => Ok(h_compute1(
            need_int(map, "n1")?,
            need_int(map, "n2")?,
            need_int(map, "a")?,
            need_int(map, "b")?,
            need_int(map, "c")?,
        )),
        "mainthm" | "corollary" | "young" => {
            let l = need_int(map, "l")? as usize;
            let nu = need_shape(map, "nu")?;
            let lam = need_shape(map, "lambda")?;
            if dump {
                let classes = enum_paired_tuples(l, &nu, &lam);
                eprintln!("{}", serde_json::to_string_pretty(&classes).unwrap());
                if rule == "young" {
                    let mut all = Vec::new();
                    for d in enum_paired_diagrams(l, &nu, &lam)? {
                        for t in enum_tableaux(&d) {
                            all.push(t);
                        }
                    }
                    eprintln!("{}", serde_json::to_string_pretty(&all).unwrap());
                }
            }
            match rule {
                "mainthm" => h_mainthm(l, &nu, &lam),
                "corollary" => h_corollary(l, &nu, &lam),
                _ => h_young(l, &nu, &lam),
            }
        }
        "dual-n" => p_dual(
            need_int(map, "n")?,
            need_int(map, "l")?,
            need_int(map, "i")?,
            need_int(map, "j")?,
        ),
        "dual-1" => h_dual1(need_int(map, "l")?, need_int(map, "j")?),
        other => Err(Error::Parse(format!(
            "unknown rule '{}' (expected computen|compute1|mainthm|corollary|young|dual-n|dual-1)",
            other
        ))),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            2
        }
    };
    std::process::exit(code);
}
