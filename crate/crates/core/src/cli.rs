//! Command-line front end.
//!
//! Exit codes: 0 when everything requested passed, 1 when a verification
//! failed, 2 on invalid flags or input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::cg::{extended_rhat, sigma_cg, sigma_cg_family, split_extended, structure_constants};
use crate::error::{Error, Result};
use crate::rtt::{compare_relation_spans, relations_text};
use crate::scalar::{parse_rational, Scalar, Specialization};
use crate::tensor::Operator;
use crate::verify::{self, Kind, MatrixOps, VerificationReport};

pub const DEFAULT_SEED: u64 = 0x5eed_c6e7;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qlie",
    version,
    about = "Exact Cremmer-Gervais braid matrices, structure constants and identity checks"
)]
pub struct Cli {
    /// Worker threads (falls back to QLIE_JOBS, then to the number of CPUs)
    #[arg(long, global = true, env = "QLIE_JOBS")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a matrix or the structure constants
    Gen {
        #[arg(value_enum)]
        target: GenTarget,
        #[command(flatten)]
        params: Params,
    },
    /// Run verification suites and emit a report
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        params: Params,
        /// Overwrite one entry before checking, as "(I,J;K,L)=value"
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Compare the matrix of the functional R̂ with the closed-form extended matrix
    CrossCheck {
        #[command(flatten)]
        params: Params,
        /// Flip the sign of the 𝔰 term on the functional side
        #[arg(long, hide = true)]
        flip_s_sign: bool,
    },
    /// Print every RTT and bicovariant calculus relation, one per line
    Relations {
        #[command(flatten)]
        params: Params,
    },
    /// Print (σ - 1)(σ + 1 - β) for the small block (exploratory)
    Hecke {
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenTarget {
    Sigma,
    SigmaFamily,
    Extended,
    Constants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Braid,
    Ybe,
    Cybe,
    Components,
    Ybfr,
    Qlie,
    Rtt,
    All,
}

impl Suite {
    const EACH: [Suite; 7] = [
        Suite::Braid,
        Suite::Ybe,
        Suite::Cybe,
        Suite::Components,
        Suite::Ybfr,
        Suite::Qlie,
        Suite::Rtt,
    ];
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        <Suite as ValueEnum>::from_str(s, false).map_err(|_| Error::Invalid(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    /// Number of small indices (V has dimension n + 1)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Rational value for β (symbolic if omitted)
    #[arg(long, value_parser = rational)]
    pub beta: Option<BigRational>,
    /// Rational value for C (symbolic if omitted)
    #[arg(long = "C", value_parser = rational)]
    pub c: Option<BigRational>,
    /// Nonzero rational value for p (symbolic if omitted)
    #[arg(long, value_parser = nonzero_rational)]
    pub p: Option<BigRational>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Seed for randomized screening steps
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl Params {
    fn n(&self) -> usize {
        self.n as usize
    }

    pub fn spec(&self) -> Specialization {
        Specialization {
            beta: self.beta.clone(),
            c: self.c.clone(),
            p: self.p.clone(),
        }
    }
}

fn rational(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn nonzero_rational(s: &str) -> std::result::Result<BigRational, String> {
    let v = rational(s)?;
    if v.is_zero() {
        Err("p must be nonzero".into())
    } else {
        Ok(v)
    }
}

/// Parses `(I,J;K,L)=value`. The value uses the scalar syntax, with `2C`
/// accepted for `2*C`.
pub fn parse_corruption(src: &str) -> Result<(Vec<usize>, Vec<usize>, Scalar)> {
    let bad = || Error::Invalid(format!("corruption must look like (I,J;K,L)=value, got '{src}'"));
    let (idx, value) = src.split_once('=').ok_or_else(bad)?;
    let idx = idx.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let (out, inp) = idx.split_once(';').ok_or_else(bad)?;
    let nums = |s: &str| -> Result<Vec<usize>> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect()
    };
    let (out, inp) = (nums(out)?, nums(inp)?);
    if out.len() != 2 || inp.len() != 2 {
        return Err(bad());
    }
    let mut expanded = String::new();
    let mut prev: Option<char> = None;
    for ch in value.trim().chars() {
        if matches!(ch, 'b' | 'C' | 'p') && prev.is_some_and(|p| p.is_ascii_digit() || p == ')') {
            expanded.push('*');
        }
        expanded.push(ch);
        prev = Some(ch);
    }
    Ok((out, inp, expanded.parse()?))
}

pub type Corruption = (Vec<usize>, Vec<usize>, Scalar);

fn corrupted(mut op: Operator, c: Option<&Corruption>) -> Result<Operator> {
    if let Some((o, i, v)) = c {
        op.set(o, i, v.clone())?;
    }
    Ok(op)
}

fn matrices(n: usize, target: Kind, c: Option<&Corruption>) -> Result<MatrixOps> {
    if c.is_none() {
        return MatrixOps::new(n);
    }
    let ops = [Kind::Rho, Kind::S, Kind::R]
        .into_iter()
        .map(|k| {
            let op = MatrixOps::two_leg(n, k)?;
            Ok((k, if k == target { corrupted(op, c)? } else { op }))
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixOps::from_two_leg(n, ops)
}

/// Runs one suite. A corruption is applied to the matrix the suite is most
/// directly about: the extended R̂ for braid, qlie and rtt (the latter two
/// read σ and C back out of it, and rtt corrupts only the bicovariant side),
/// σ_p for ybe, r for cybe and 𝔰 for components and ybfr.
pub fn run_suite(
    suite: Suite,
    n: usize,
    spec: &Specialization,
    seed: u64,
    corruption: Option<&Corruption>,
) -> Result<Vec<VerificationReport>> {
    let one = |r: VerificationReport| Ok(vec![r]);
    match suite {
        Suite::Braid => one(verify::check_braid(&corrupted(extended_rhat(n)?, corruption)?, spec)?),
        Suite::Ybe => one(verify::check_cg_family(
            &corrupted(sigma_cg_family(n)?, corruption)?,
            &sigma_cg(n)?,
            spec,
        )?),
        Suite::Cybe => one(verify::check_cybe_suite_with(n, &matrices(n, Kind::R, corruption)?, spec)?),
        Suite::Components => one(verify::check_component_identities_with(
            n,
            &matrices(n, Kind::S, corruption)?,
            spec,
        )?),
        Suite::Ybfr => one(verify::check_quadratic_ybe_components_with(
            n,
            &matrices(n, Kind::S, corruption)?,
            spec,
        )?),
        Suite::Qlie => {
            let (sigma, ct) = split_extended(&corrupted(extended_rhat(n)?, corruption)?)?;
            one(verify::check_qlie_axioms(&sigma, &ct, spec)?)
        }
        Suite::Rtt => {
            let clean = extended_rhat(n)?;
            let (sigma, ct) = split_extended(&corrupted(clean.clone(), corruption)?)?;
            one(compare_relation_spans(&clean, &sigma, &ct, spec, seed)?)
        }
        Suite::All => {
            let parts: Vec<Result<Vec<VerificationReport>>> = Suite::EACH
                .par_iter()
                .map(|s| run_suite(*s, n, spec, seed, corruption))
                .collect();
            let mut out = Vec::new();
            for p in parts {
                out.extend(p?);
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct Combined<'a> {
    pass: bool,
    reports: &'a [VerificationReport],
}

/// Combined `{"pass", "reports"}` document, or a CSV/text rendering of it.
pub fn format_reports(reports: &[VerificationReport], format: Format) -> Result<String> {
    let pass = reports.iter().all(|r| r.pass);
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Combined { pass, reports })?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "n", "item", "pass", "checked", "failures"])?;
            for r in reports {
                for it in &r.items {
                    w.write_record([
                        r.suite.as_str(),
                        &r.n.to_string(),
                        &it.name,
                        &it.pass.to_string(),
                        &it.checked.to_string(),
                        &it.failures.to_string(),
                    ])?;
                }
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
                .expect("csv output is utf-8")
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let verdict = if r.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{verdict} {} (n={}, {} checks)", r.suite, r.n, r.checked);
                for it in &r.items {
                    let v = if it.pass { "ok  " } else { "FAIL" };
                    let _ = writeln!(s, "  {v} {} ({} checked, {} failing)", it.name, it.checked, it.failures);
                }
                for w in &r.witnesses {
                    let _ = writeln!(s, "  witness {} at {}: {} != {}", w.identity, w.at, w.lhs, w.rhs);
                }
                if let Some(note) = &r.note {
                    let _ = writeln!(s, "  note: {note}");
                }
            }
            let _ = writeln!(s, "{}", if pass { "PASS" } else { "FAIL" });
            s
        }
    })
}

fn format_operator(op: &Operator, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => op.to_json()? + "\n",
        Format::Csv => op.to_csv()?,
        Format::Text if op.is_zero() => "0\n".to_string(),
        Format::Text => op.to_text(),
    })
}

fn emit(params: &Params, body: &str) -> Result<()> {
    match &params.output {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen { target, params } => {
            let n = params.n();
            let spec = params.spec();
            let body = match target {
                GenTarget::Sigma => format_operator(&sigma_cg(n)?.specialize(&spec)?, params.format)?,
                GenTarget::SigmaFamily => {
                    format_operator(&sigma_cg_family(n)?.specialize(&spec)?, params.format)?
                }
                GenTarget::Extended => format_operator(&extended_rhat(n)?.specialize(&spec)?, params.format)?,
                GenTarget::Constants => {
                    let ct = structure_constants(n)?.specialize(&spec)?;
                    match params.format {
                        Format::Json => ct.to_json()? + "\n",
                        Format::Csv => ct.to_csv()?,
                        Format::Text => ct.to_text(),
                    }
                }
            };
            emit(&params, &body)?;
            Ok(EXIT_PASS)
        }
        Command::Verify { suite, params, corrupt } => {
            let corruption = corrupt.as_deref().map(parse_corruption).transpose()?;
            let reports = run_suite(suite, params.n(), &params.spec(), params.seed, corruption.as_ref())?;
            emit(&params, &format_reports(&reports, params.format)?)?;
            Ok(if reports.iter().all(|r| r.pass) { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::CrossCheck { params, flip_s_sign } => {
            let sign = if flip_s_sign { -1 } else { 1 };
            let report = verify::check_cross_construction(params.n(), &params.spec(), sign)?;
            let pass = report.pass;
            emit(&params, &format_reports(&[report], params.format)?)?;
            Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Relations { params } => {
            let n = params.n();
            let spec = params.spec();
            let text = relations_text(
                &extended_rhat(n)?.specialize(&spec)?,
                &sigma_cg(n)?.specialize(&spec)?,
                &structure_constants(n)?.specialize(&spec)?,
            )?;
            emit(&params, &text)?;
            Ok(EXIT_PASS)
        }
        Command::Hecke { params } => {
            let residual = verify::hecke_residual(&sigma_cg(params.n())?, &params.spec())?;
            emit(&params, &format_operator(&residual, params.format)?)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Usage line of the subcommand named in `args`, or of the whole program.
fn usage_for(args: &[OsString]) -> clap::builder::StyledStr {
    let mut cmd = Cli::command();
    cmd.build();
    let sub = args
        .iter()
        .skip(1)
        .filter_map(|a| a.to_str())
        .find(|a| !a.starts_with('-'))
        .map(str::to_owned);
    match sub.and_then(|name| cmd.find_subcommand_mut(&name).map(|c| c.render_usage())) {
        Some(u) => u,
        None => cmd.render_usage(),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() && !e.to_string().contains("Usage:") {
                eprintln!("\n{}", usage_for(&args));
            }
            return e.exit_code();
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
