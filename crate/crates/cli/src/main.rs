mod any;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::Value;

use any::{AnyRankOne, AnyTuple};
use mconv_core::fields::Rationals;
use mconv_core::group::{reduce_tuple_to, sl_certificate, CertificateMode};
use mconv_core::pipeline::{run_pipeline, PipelineConfig};
use mconv_core::tuples::{construct_rank_one, construct_t, Pattern, RankOneTuple};

#[derive(Parser)]
#[command(name = "mconv", version, about = "Exact middle convolution of monodromy tuples")]
struct Cli {
    /// Accepted for compatibility; every computation is deterministic.
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the rank-two tuple T_{m,r}.
    Construct {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a rank-one sign tuple from a named pattern or explicit signs.
    RankOne {
        #[arg(long, conflicts_with = "signs")]
        pattern: Option<String>,
        /// Comma-separated signs, e.g. "1,1,-1,-1".
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
        #[arg(long)]
        r: Option<usize>,
        /// "rational" (default) or "cyclotomic:N".
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Twist a tuple by a rank-one tuple.
    Tensor {
        tuple: PathBuf,
        rank_one: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Middle convolution with an integer character value.
    Convolve {
        #[arg(long, allow_hyphen_values = true)]
        lambda: i64,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the entry census and Jordan data of a tuple.
    Analyze {
        input: PathBuf,
        /// Comma-separated eigenvalue orders.
        #[arg(long)]
        orders: Option<String>,
        #[arg(long, default_value_t = 0)]
        order_bound: u64,
    },
    /// Reduce a cyclotomic tuple into F_{l^k}.
    Reduce {
        input: PathBuf,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the SL / SL+- hypothesis battery on a finite-field tuple.
    Certify {
        input: PathBuf,
        #[arg(long, default_value = "sl")]
        mode: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a family, compare with its expected Jordan tables, optionally certify.
    Pipeline {
        #[arg(long)]
        family: u8,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        orders: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Convolve, compare with the rank formula, and convolve back.
    Selfcheck {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        lambda: i64,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| anyhow::anyhow!("bad list item {x:?}: {e}")))
        .collect()
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Construct { m, r, output } => {
            emit(&construct_t(m, r)?.to_json(), output.as_deref())?;
        }
        Command::RankOne {
            pattern,
            signs,
            r,
            field,
            output,
        } => {
            let signs: Vec<i64> = match (pattern, signs) {
                (Some(p), None) => {
                    let r = r.context("--r is required with --pattern")?;
                    let p: Pattern = p.parse()?;
                    construct_rank_one(p, r, &Rationals)?;
                    p.signs(r)
                }
                (None, Some(s)) => parse_list(&s)?,
                _ => bail!("give exactly one of --pattern and --signs"),
            };
            let doc = match field.as_str() {
                "rational" | "Q" => RankOneTuple::from_signs(&Rationals, &signs)?.to_json(),
                other => {
                    let order = other
                        .strip_prefix("cyclotomic:")
                        .context("--field must be \"rational\" or \"cyclotomic:N\"")?
                        .parse::<u64>()?;
                    let k = mconv_core::fields::make_cyclotomic_field(order)?;
                    RankOneTuple::from_signs(&k, &signs)?.to_json()
                }
            };
            emit(&doc, output.as_deref())?;
        }
        Command::Tensor {
            tuple,
            rank_one,
            output,
        } => {
            let t = AnyTuple::from_json(&read_json(&tuple)?)?;
            let c = AnyRankOne::from_json(&read_json(&rank_one)?)?;
            emit(&t.tensor(&c)?.to_json(), output.as_deref())?;
        }
        Command::Convolve {
            lambda,
            input,
            output,
        } => {
            let t = AnyTuple::from_json(&read_json(&input)?)?;
            emit(&t.convolve(lambda)?.to_json(), output.as_deref())?;
        }
        Command::Analyze {
            input,
            orders,
            order_bound,
        } => {
            let t = AnyTuple::from_json(&read_json(&input)?)?;
            let orders = orders.map(|s| parse_list::<u64>(&s)).transpose()?;
            emit(&t.analyze(orders.as_deref(), order_bound)?, None)?;
        }
        Command::Reduce {
            input,
            ell,
            k,
            output,
        } => {
            let v = read_json(&input)?;
            let AnyTuple::Cyclotomic(t) = AnyTuple::from_json(&v)? else {
                bail!("reduce needs a tuple over a cyclotomic field");
            };
            emit(&reduce_tuple_to(&t, ell, k)?.to_json(), output.as_deref())?;
        }
        Command::Certify { input, mode, output } => {
            let mode: CertificateMode = mode.parse()?;
            let AnyTuple::Finite(t) = AnyTuple::from_json(&read_json(&input)?)? else {
                bail!("certify needs a tuple over a finite field");
            };
            let cert = sl_certificate(&t, mode);
            emit(&cert.to_json(), output.as_deref())?;
            return Ok(if cert.verdict() { Outcome::Ok } else { Outcome::Failed });
        }
        Command::Pipeline {
            family,
            m,
            r,
            q,
            mode,
            orders,
            report,
        } => {
            let config = PipelineConfig {
                family,
                m,
                r,
                q,
                eigenvalue_orders: orders.map(|s| parse_list::<u64>(&s)).transpose()?,
                mode,
            };
            let rep = run_pipeline(&config)?;
            emit(&rep.to_json(), report.as_deref())?;
            if report.is_some() {
                eprintln!(
                    "rank {} (expected {}), oracle match {}, verdict {}",
                    rep.rank,
                    rep.expected_rank,
                    rep.oracle_match,
                    rep.verdict().map_or("n/a".to_string(), |v| v.to_string())
                );
            }
            return Ok(if rep.success() { Outcome::Ok } else { Outcome::Failed });
        }
        Command::Selfcheck { input, lambda } => {
            let t = AnyTuple::from_json(&read_json(&input)?)?;
            let rep = t.selfcheck(lambda)?;
            emit(&rep.to_json(), None)?;
            return Ok(if rep.passed() { Outcome::Ok } else { Outcome::Failed });
        }
    }
    Ok(Outcome::Ok)
}
