use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opch_core::derived::{check_di_identities, check_weight_criterion, dim_dervar};
use opch_core::di::{parse_di, tau};
use opch_core::express::{express, Method};
use opch_core::report::run_report;
use opch_core::term::{format_term, parse_term, Expr};
use opch_core::variety::{bicom_normal_form, VarietyName};
use opch_core::{Config, Engine, Error, Execution, TermError};

const CACHE_ENV: &str = "OPCH_CACHE_DIR";
const DEFAULT_CACHE: &str = ".opch-cache";

#[derive(Parser)]
#[command(
    name = "opch",
    version,
    about = "Exact computations with derived operations on nonassociative algebras"
)]
struct Cli {
    /// Where echelon bases are cached (falls back to $OPCH_CACHE_DIR, then .opch-cache/).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Single-threaded evaluation.
    #[arg(long, global = true)]
    sequential: bool,
    /// More logging; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight of a homogeneous expression.
    Wt {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Expand a ≻/≺ term (`>` and `<`) into the free algebra.
    Tau {
        #[arg(allow_hyphen_values = true)]
        diexpr: String,
    },
    /// Normal form of an expression in a variety.
    Nf {
        #[arg(long)]
        variety: VarietyName,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Dimension of the multilinear part of a variety.
    Dim {
        #[arg(long)]
        variety: VarietyName,
        #[arg(long)]
        arity: usize,
    },
    /// Dimension of the derived variety at the given arity.
    DimDer {
        #[arg(long)]
        variety: VarietyName,
        #[arg(long)]
        arity: usize,
    },
    /// Compare expansion rank with the weight −1 dimension.
    Criterion {
        #[arg(long)]
        variety: VarietyName,
        #[arg(long)]
        arity: usize,
    },
    /// Check the identities of a derived variety at arity 3.
    CheckIdentities {
        #[arg(long)]
        derived: VarietyName,
    },
    /// Rewrite a weight −1 expression in ≻/≺ form.
    Express {
        #[arg(long)]
        variety: VarietyName,
        #[arg(long, default_value_t = Method::Solver)]
        method: Method,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run the full check suite and write a JSON report.
    Report {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        max_arity: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Outcome {
    Ok,
    Failed,
}

fn cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| {
        std::env::var_os(CACHE_ENV)
            .filter(|s| !s.is_empty())
            .map(PathBuf::from)
    })
    .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
}

fn parse(s: &str) -> Result<Expr, Error> {
    let e = parse_term(s)?;
    if e.is_zero() {
        return Err(TermError::ZeroExpr.into());
    }
    Ok(e)
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Ok
    } else {
        Outcome::Failed
    }
}

fn run(cmd: Command, engine: &Engine) -> Result<Outcome, Error> {
    match cmd {
        Command::Wt { expr } => {
            println!("{}", parse(&expr)?.weight()?);
        }
        Command::Tau { diexpr } => {
            println!("{}", format_term(&tau(&parse_di(&diexpr)?)));
        }
        Command::Nf { variety, expr } => {
            let e = parse(&expr)?;
            let nf = if variety == VarietyName::BiCom {
                bicom_normal_form(&e)
            } else {
                let w = e.weight()?;
                let n = e.arity().ok_or(Error::NotMultilinear { arity: 0 })?;
                engine.component(variety, n, w)?.reduce(&e)?
            };
            println!("{}", format_term(&nf));
        }
        Command::Dim { variety, arity } => {
            println!("{}", engine.dim_variety(variety, arity)?);
        }
        Command::DimDer { variety, arity } => {
            println!("{}", dim_dervar(engine, variety, arity)?);
        }
        Command::Criterion { variety, arity } => {
            let r = check_weight_criterion(engine, variety, arity)?;
            let word = if r.holds { "holds" } else { "fails" };
            println!("rank {} dim {} {word}", r.rank, r.dim);
            return Ok(verdict(r.holds));
        }
        Command::CheckIdentities { derived } => {
            let base = derived.base().ok_or_else(|| Error::PairMismatch {
                derived: derived.to_string(),
                base: "-".into(),
            })?;
            let r = check_di_identities(engine, derived, base)?;
            for id in &r.identities {
                let word = if id.vanishes {
                    "vanishes"
                } else {
                    "does not vanish"
                };
                println!("{}: {word}", id.label);
            }
            println!(
                "span {} kernel {} span-in-kernel {}",
                r.span_dim, r.kernel_dim, r.span_in_kernel
            );
            return Ok(verdict(r.pass()));
        }
        Command::Express {
            variety,
            method,
            expr,
        } => {
            let t = express(engine, variety, method, &parse(&expr)?)?;
            println!("{t}");
        }
        Command::Report { max_arity, out } => {
            let report = run_report(engine, max_arity as usize)?;
            report.write(&out)?;
            let s = report.summary;
            println!(
                "{} checks, {} passed, {} failed",
                s.total, s.passed, s.failed
            );
            for r in report.records.iter().filter(|r| !r.pass) {
                println!(
                    "FAIL {}: expected {} computed {}",
                    r.check_id, r.expected, r.computed
                );
            }
            return Ok(verdict(report.all_passed()));
        }
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let config = Config {
        execution: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
        cache_dir: Some(cache_dir(cli.cache_dir)),
        ..Config::default()
    };
    let engine = Engine::new(config);
    match run(cli.command, &engine) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
