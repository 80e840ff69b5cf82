//! Argument parsing and command dispatch.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Context;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use mmfp_core::field::{primes_excluding, Prime};
use mmfp_core::hecke::{decompose_eigensystems, hecke_matrix, precision_budget};
use mmfp_core::spaces::{filtration_with, sturm_bound};
use mmfp_core::verifier::{corollary_sweep_with, regression_examples_with, verify_theorem_with, Source};
use mmfp_core::{BasisSource, DirectBasis, Error, QSeries};

use crate::cache::CachedBasis;
use crate::json::{self, InputError, SeriesInput};

#[derive(Parser, Debug)]
#[command(name = "mmfp", version, about = "Level-one modular forms mod p and their Hecke eigensystems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Directory for cached bases.
    #[arg(long, env = "MMFP_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Echelonized Miller basis of M_k or S_k mod p.
    Basis {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        /// Number of coefficients (default: Sturm bound + 1).
        #[arg(long)]
        prec: Option<usize>,
        #[arg(long)]
        cuspidal: bool,
    },
    /// Matrix of T_l in Miller coordinates.
    HeckeMatrix {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        prec: Option<usize>,
        #[arg(long)]
        cuspidal: bool,
    },
    /// Simultaneous eigensystems of T_l, l <= L, on M_k or S_k.
    Eigensystems {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        /// Prime bound L.
        #[arg(long, default_value_t = 13)]
        primes: u32,
        #[arg(long)]
        cuspidal: bool,
    },
    /// Filtration of a form mod p.
    Filtration {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        source: SourceSpec,
    },
    /// Find the cusp form carrying the eigensystem of an eigenform.
    Verify {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        source: SourceSpec,
        #[arg(long, default_value_t = 37)]
        primes: u32,
    },
    /// Filtration versus cuspidality for every eigenform of M_k, k <= K.
    Corollary {
        #[arg(long)]
        p: u32,
        /// Largest weight K.
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 13)]
        primes: u32,
    },
    /// Recompute the five reference Eisenstein cases.
    Regression,
}

/// `eisenstein:K`, `delta` or `file:PATH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceSpec {
    Eisenstein(u32),
    Delta,
    File(PathBuf),
}

impl FromStr for SourceSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "delta" {
            return Ok(SourceSpec::Delta);
        }
        if let Some(k) = s.strip_prefix("eisenstein:") {
            return k
                .parse()
                .map(SourceSpec::Eisenstein)
                .map_err(|_| format!("bad weight in {s:?}"));
        }
        if let Some(path) = s.strip_prefix("file:") {
            if !path.is_empty() {
                return Ok(SourceSpec::File(PathBuf::from(path)));
            }
        }
        Err(format!("expected eisenstein:K, delta or file:PATH, got {s:?}"))
    }
}

/// What a command produced and how the process should exit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Outcome {
        Outcome { code, stdout: String::new(), stderr }
    }
}

enum Failure {
    Usage(String),
    Math(Error),
    Report(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Format(m) => Failure::Usage(m),
            InputError::Math(e) => Failure::Math(e),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let sub = argv.get(1).and_then(|a| a.to_str());
                Outcome::fail(2, with_synopsis(text, sub))
            } else {
                Outcome::ok(text)
            };
        }
    };
    run(&cli)
}

/// Appends the usage line of `sub` (or of the whole program) unless the
/// message already carries one.
fn with_synopsis(mut text: String, sub: Option<&str>) -> String {
    if text.contains("Usage:") {
        return text;
    }
    let mut cmd = Cli::command();
    cmd.build();
    let usage = match sub.and_then(|s| cmd.find_subcommand_mut(s)) {
        Some(sc) => sc.render_usage(),
        None => cmd.render_usage(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text.push('\n');
    text.push_str(&usage.to_string());
    text.push('\n');
    text
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Basis { .. } => "basis",
        Command::HeckeMatrix { .. } => "hecke-matrix",
        Command::Eigensystems { .. } => "eigensystems",
        Command::Filtration { .. } => "filtration",
        Command::Verify { .. } => "verify",
        Command::Corollary { .. } => "corollary",
        Command::Regression => "regression",
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let cached = cli.cache_dir.as_ref().map(CachedBasis::new);
    let bases: &dyn BasisSource = match &cached {
        Some(c) => c,
        None => &DirectBasis,
    };
    match dispatch(cli, bases) {
        Ok(out) => Outcome::ok(out),
        Err(Failure::Usage(m)) => Outcome::fail(
            2,
            with_synopsis(format!("error: {m}\n"), Some(subcommand_name(&cli.command))),
        ),
        Err(Failure::Math(e)) => Outcome::fail(1, format!("error: {e}\n")),
        Err(Failure::Report(out)) => Outcome { code: 1, stdout: out, stderr: String::new() },
    }
}

fn prime(p: u32) -> Result<Prime, Failure> {
    Prime::new(p).map_err(|e| Failure::Usage(format!("--p: {e}")))
}

fn load_source(spec: &SourceSpec) -> Result<Source, Failure> {
    Ok(match spec {
        SourceSpec::Eisenstein(k) => Source::Eisenstein(*k),
        SourceSpec::Delta => Source::Delta,
        SourceSpec::File(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(|e| Failure::Usage(format!("{e:#}")))?;
            Source::Explicit(SeriesInput::parse(&text)?.to_series()?)
        }
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn residues<'a>(xs: impl IntoIterator<Item = &'a mmfp_core::FieldElement>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn head(f: &QSeries, n: usize) -> QSeries {
    f.truncate(n.min(f.precision())).unwrap_or_else(|_| f.clone())
}

fn dispatch(cli: &Cli, bases: &dyn BasisSource) -> Result<String, Failure> {
    let mut out = String::new();
    let as_json = cli.format == Format::Json;
    match &cli.command {
        Command::Basis { p, k, prec, cuspidal } => {
            let p = prime(*p)?;
            let m = prec.unwrap_or(sturm_bound(*k) + 1);
            let space = bases.basis(*k, p, m, *cuspidal)?;
            if as_json {
                out = pretty(&json::basis(&space));
            } else {
                for f in space.basis() {
                    writeln!(out, "{f}").unwrap();
                }
            }
        }
        Command::HeckeMatrix { p, k, ell, prec, cuspidal } => {
            let p = prime(*p)?;
            let m = prec.unwrap_or(precision_budget(*k, *ell));
            let h = hecke_matrix(&bases.basis(*k, p, m, *cuspidal)?, *ell)?;
            if as_json {
                out = pretty(&json::hecke_matrix(&h));
            } else {
                for i in 0..h.matrix.rows() {
                    writeln!(out, "{}", residues(h.matrix.row(i))).unwrap();
                }
            }
        }
        Command::Eigensystems { p, k, primes, cuspidal } => {
            let p = prime(*p)?;
            let ells = primes_excluding(*primes, p);
            let ell_max = ells.last().copied().ok_or(Error::NoPrimes(*primes))?;
            let space = bases.basis(*k, p, precision_budget(*k, ell_max), *cuspidal)?;
            let records = decompose_eigensystems(&space, &ells)?;
            if as_json {
                out = pretty(&serde_json::Value::Array(records.iter().map(json::record).collect()));
            } else {
                for r in &records {
                    let status = if r.resolved { "resolved" } else { "unresolved" };
                    let values = r
                        .eigensystem
                        .values()
                        .iter()
                        .map(|(l, v)| format!("T_{l}={v}"))
                        .collect::<Vec<_>>()
                        .join(" ");
                    write!(out, "[{status}] {values}").unwrap();
                    match &r.eigenform {
                        Some(f) => writeln!(out, " : {}", head(f, 12)).unwrap(),
                        None => writeln!(out).unwrap(),
                    }
                }
            }
        }
        Command::Filtration { p, source } => {
            let p = prime(*p)?;
            let source = load_source(source)?;
            let f = source.qexp(p, sturm_bound(source.weight()) + 1)?;
            let r = filtration_with(bases, &f, p)?;
            if as_json {
                out = pretty(&json::filtration(p, &r));
            } else {
                writeln!(out, "filtration = {}", r.filtration).unwrap();
            }
        }
        Command::Verify { p, source, primes } => {
            let p = prime(*p)?;
            let source = load_source(source)?;
            let v = verify_theorem_with(bases, p, &source, *primes)?;
            if as_json {
                out = pretty(&json::verdict(&v));
            } else {
                writeln!(out, "p = {}", v.p).unwrap();
                writeln!(out, "source = {}", v.source).unwrap();
                writeln!(out, "filtration = {}", v.filtration).unwrap();
                writeln!(out, "source_is_cuspidal = {}", v.source_is_cuspidal).unwrap();
                writeln!(out, "matched_weight = {}", v.matched_weight).unwrap();
                writeln!(out, "multiplicity = {}", v.multiplicity).unwrap();
                let values = v.eigensystem.values().iter().map(|(_, x)| x);
                writeln!(out, "eigensystem = ({})", residues(values)).unwrap();
                writeln!(out, "qexpansion = {}", head(v.qexpansion(), 38)).unwrap();
            }
        }
        Command::Corollary { p, k, primes } => {
            let p = prime(*p)?;
            let r = corollary_sweep_with(bases, p, *k, *primes)?;
            if as_json {
                out = pretty(&json::corollary(&r));
            } else {
                for e in &r.entries {
                    let kind = if e.cuspidal { "cuspidal" } else { "non-cuspidal" };
                    writeln!(out, "k = {} #{} w = {} {kind} : {}", e.weight, e.index, e.filtration, head(&e.eigenform, 6))
                        .unwrap();
                }
                for u in &r.unresolved {
                    writeln!(
                        out,
                        "k = {} #{} unresolved (eigenspace {}, generalized {})",
                        u.weight, u.index, u.eigenspace_dimension, u.generalized_dimension
                    )
                    .unwrap();
                }
                writeln!(out, "violations = {}", r.violations.len()).unwrap();
            }
            if !r.violations.is_empty() {
                return Err(Failure::Report(out));
            }
        }
        Command::Regression => {
            let r = regression_examples_with(bases);
            if as_json {
                out = pretty(&json::regression(&r));
            } else {
                for c in &r.cases {
                    let tag = if c.passed() { "PASS" } else { "FAIL" };
                    write!(out, "{tag} p = {} E_{}", c.case.p, c.case.k).unwrap();
                    match (&c.verdict, &c.error) {
                        (Some(v), _) => writeln!(out, ": w = {}, matched weight {}", v.filtration, v.matched_weight).unwrap(),
                        (None, Some(e)) => writeln!(out, ": {e}").unwrap(),
                        (None, None) => writeln!(out).unwrap(),
                    }
                    for d in &c.diffs {
                        writeln!(out, "    a_{}: expected {}, found {}", d.n, d.expected, d.found).unwrap();
                    }
                }
            }
            if !r.passed() {
                return Err(Failure::Report(out));
            }
        }
    }
    Ok(out)
}
