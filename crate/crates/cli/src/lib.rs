//! The `qrrt` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qrrt_core::bailey::{verify_bailey_pair, DKParams};
use qrrt_core::dsl::{self, CatalogEntry, DEFAULT_BIVARIATE, DEFAULT_Q_ORDER};
use qrrt_core::partitions::{count_a, count_b, verify_partition_theorem, verify_refined, PartitionConstraint};
use qrrt_core::qdiff::{verify_f_system, verify_q_system, F_FAMILIES};
use qrrt_core::{Error, Orders, Status, VerificationReport};
use rayon::prelude::*;

pub mod json;

pub use json::{emit_json, parse_json};

#[derive(Parser, Debug)]
#[command(name = "qrrt", version, about = "Exact verification of Rogers-Ramanujan type q-series identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct OrderArgs {
    /// Truncation order in q [env: QRRT_ORDER; default 100, or 60 with a free a]
    #[arg(long)]
    order: Option<i64>,
    /// Truncation order in a for expressions in a [default 20]
    #[arg(long)]
    a_order: Option<i64>,
}

impl OrderArgs {
    fn q(&self, bivariate: bool) -> Result<i64, String> {
        if let Some(q) = self.order {
            return Ok(q);
        }
        if let Some(v) = std::env::var_os("QRRT_ORDER") {
            return v
                .to_str()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| format!("QRRT_ORDER must be an integer, got {v:?}"));
        }
        Ok(if bivariate { DEFAULT_BIVARIATE.1 } else { DEFAULT_Q_ORDER })
    }

    fn a(&self) -> i64 {
        self.a_order.unwrap_or(DEFAULT_BIVARIATE.0)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand an expression as a truncated series
    Expand {
        expr: String,
        #[command(flatten)]
        orders: OrderArgs,
    },
    /// Verify one catalog entry, given by name or file
    Verify {
        target: String,
        #[command(flatten)]
        orders: OrderArgs,
        /// Write a JSON report to PATH ("-" for stdout)
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verify catalog entries concurrently
    Catalog {
        /// Entry names; use --all for every entry
        names: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Print entry names and exit
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        orders: OrderArgs,
        /// Worker threads [default: available parallelism]
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare definitional and closed-form beta for a parametrized Bailey pair
    Bailey {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
        #[command(flatten)]
        orders: OrderArgs,
    },
    /// Check the q-difference systems of the Q and F families
    Qdiff {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        #[command(flatten)]
        orders: OrderArgs,
    },
    /// Compare the partition counts A and B
    Partitions {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        i: i64,
        #[arg(long, default_value_t = 30)]
        nmax: u64,
        /// Also compare the refined generating function with Q
        #[arg(long)]
        refined: bool,
        #[command(flatten)]
        orders: OrderArgs,
    },
}

/// Failures that end a command early.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Validation { .. }
            | Error::UnknownEntry(_)
            | Error::InvalidIndex { .. }
            | Error::UnsupportedParams { .. } => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Runs the command line `argv` (program name first). Returns the exit code:
/// 0 when every check passes, 1 on a failed check, 2 on a usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(reports) => {
            for r in reports.iter().filter(|r| !r.passed()) {
                let _ = writeln!(err, "{r}");
            }
            i32::from(!reports.iter().all(VerificationReport::passed))
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Runtime(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<Vec<VerificationReport>, Failure> {
    match cmd {
        Command::Expand { expr, orders } => {
            let e = dsl::parse_expr(&expr)?;
            let o = if e.mentions_a() {
                Orders::bivariate(orders.a(), orders.q(true).map_err(Failure::Usage)?)
            } else {
                Orders::univariate(orders.q(false).map_err(Failure::Usage)?)
            };
            writeln!(out, "{}", dsl::evaluate(&e, o)?)?;
            Ok(Vec::new())
        }
        Command::Verify { target, orders, json } => {
            let entry = load(&target)?;
            let r = verify(&entry, orders)?;
            writeln!(out, "{r}")?;
            let reports = vec![r];
            write_json(json.as_deref(), &reports, out)?;
            Ok(reports)
        }
        Command::Catalog { names, all, list, orders, jobs, json } => {
            let entries = dsl::catalog()?;
            if list {
                for e in &entries {
                    writeln!(out, "{}", e.name)?;
                }
                return Ok(Vec::new());
            }
            let selected: Vec<CatalogEntry> = if all {
                entries
            } else if names.is_empty() {
                return Err(Failure::Usage("name entries or pass --all".into()));
            } else {
                let mut v = names.iter().map(|n| dsl::entry(n)).collect::<Result<Vec<_>, _>>()?;
                v.sort_by(|a, b| a.name.cmp(&b.name));
                v
            };
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(j) = jobs {
                pool = pool.num_threads(j.max(1));
            }
            let pool = pool.build().map_err(|e| Failure::Runtime(e.to_string()))?;
            let results: Vec<_> = pool.install(|| selected.par_iter().map(|e| verify(e, orders)).collect());
            let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
            writeln!(
                out,
                "{} entries: {} pass, {} fail, {} ambiguous",
                reports.len(),
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Ambiguous)
            )?;
            write_json(json.as_deref(), &reports, out)?;
            Ok(reports)
        }
        Command::Bailey { d, k, nmax, orders } => {
            let p = DKParams::new(d, k)?;
            let o = Orders::bivariate(orders.a(), orders.q(true).map_err(Failure::Usage)?);
            let r = verify_bailey_pair(&p, nmax, o)?;
            writeln!(out, "{r}")?;
            Ok(vec![r])
        }
        Command::Qdiff { d, k, orders } => {
            let o = Orders::bivariate(orders.a(), orders.q(true).map_err(Failure::Usage)?);
            let mut reports = vec![verify_q_system(d, k, o)?];
            if F_FAMILIES.contains(&(d, k)) {
                reports.push(verify_f_system(d, k, o)?);
            } else {
                writeln!(out, "no closed-form F family for (d,k) = ({d},{k}); checked Q only")?;
            }
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            Ok(reports)
        }
        Command::Partitions { d, k, i, nmax, refined, orders } => {
            let c = PartitionConstraint::new(d, k, i)?;
            for n in 0..=nmax {
                let (a, b) = (count_a(&c, n), count_b(&c, n));
                writeln!(out, "n={n}: A={a} B={b} {}", if a == b { "ok" } else { "MISMATCH" })?;
            }
            let mut reports = vec![verify_partition_theorem(&c, nmax)];
            if refined {
                let o = Orders::bivariate(orders.a(), orders.q(true).map_err(Failure::Usage)?);
                reports.push(verify_refined(&c, o)?);
            }
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            Ok(reports)
        }
    }
}

/// A catalog file if `target` names one, else a catalog entry.
fn load(target: &str) -> Result<CatalogEntry, Failure> {
    let path = Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return Ok(dsl::parse_entry(&text)?);
    }
    Ok(dsl::entry(target)?)
}

fn verify(e: &CatalogEntry, orders: OrderArgs) -> Result<VerificationReport, Failure> {
    let q = orders.q(e.is_bivariate()).map_err(Failure::Usage)?;
    Ok(dsl::verify_entry(e, q, orders.a())?)
}

fn write_json(path: Option<&Path>, reports: &[VerificationReport], out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        None => Ok(()),
        Some(p) if p == Path::new("-") => Ok(writeln!(out, "{}", emit_json(reports))?),
        Some(p) => Ok(std::fs::write(p, emit_json(reports) + "\n")?),
    }
}
