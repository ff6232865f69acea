//! Command-line front end: argument parsing, input loading and report
//! assembly. Exit codes: 0 positive or complete, 1 negative or error,
//! 2 inconclusive.

mod commands;

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::document::{module_document, parse_module_document, parse_ring_document, ring_document};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::module::Module;
use crate::report::{Report, Verdict};
use crate::ring::Ring;

/// Environment variable capping `|a|` and `|b|` in `--window a:b`.
pub const MAX_WINDOW_VAR: &str = "GRADUS_MAX_WINDOW";
const DEFAULT_MAX_WINDOW: i64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandName {
    Basis,
    Nf,
    Minres,
    Resolve,
    Koszul,
    Tor,
    E2,
    Tower,
    Cofinal,
    Invertible,
    Picpair,
    Idempotents,
    Split,
    Verify,
    Fixtures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "gradus", version, about = "Exact graded commutative algebra on finite windows")]
pub struct Args {
    #[arg(value_enum)]
    pub command: CommandName,
    /// `fixture:NAME` or a ring document path.
    #[arg(long)]
    pub ring: Option<String>,
    /// `fixture:NAME` or a module document path.
    #[arg(long)]
    pub module: Option<String>,
    /// Second module for `tor`, `e2` and `picpair`.
    #[arg(long)]
    pub module2: Option<String>,
    /// Internal degrees `a:b`.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Resolution length, or the top homological degree for Tor.
    #[arg(long)]
    pub length: Option<usize>,
    /// Comma-separated primes for `picpair`.
    #[arg(long)]
    pub at_primes: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutFormat,
    /// Ring element for `nf`.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// Comma-separated ring elements for `koszul`, `tower` and `cofinal`.
    #[arg(long, allow_hyphen_values = true)]
    pub sequence: Option<String>,
    /// Comma-separated exponents for `tower`.
    #[arg(long)]
    pub exponents: Option<String>,
    /// Exponent bound for `cofinal`; coefficient bound for the cyclic search.
    #[arg(long)]
    pub bound: Option<u32>,
    /// Largest power of the ideal tried by `cofinal`.
    #[arg(long)]
    pub power_bound: Option<u32>,
    /// Cyclic group order for `idempotents` and `split`.
    #[arg(long)]
    pub group: Option<u64>,
    /// Primitive root of unity; defaults to -1 for order 2.
    #[arg(long, allow_hyphen_values = true)]
    pub root: Option<String>,
    /// Residue dimension of the abutment for the `e2` column analysis.
    #[arg(long)]
    pub abutment: Option<usize>,
    /// Report or certificate file for `verify`.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    /// Seed for randomized commands; no current command draws from it.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// The printed text, diagnostic and exit code of one invocation.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Report,
    /// Standard output: the report, or help text.
    pub text: String,
    /// Standard error, if anything went wrong.
    pub diagnostic: Option<String>,
    pub code: i32,
}

#[derive(Debug, Clone)]
pub(crate) struct LoadedRing {
    pub ring: Ring,
    /// Base name used to match module documents against `--ring`.
    pub base: String,
}

/// Parses `argv` (without the program name) and runs the command.
pub fn run_command<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let args = match Args::try_parse_from(std::iter::once("gradus".to_string()).chain(argv.iter().cloned())) {
        Ok(a) => a,
        Err(e) => {
            let message = e.to_string();
            let report = Report::error(json!({ "argv": argv }), &message, Verdict::Error);
            return if e.use_stderr() {
                Output { text: report.to_json(), diagnostic: Some(message), report, code: 1 }
            } else {
                // help and version requests
                Output { text: message, diagnostic: None, report, code: 0 }
            };
        }
    };
    run(&args)
}

pub fn run(args: &Args) -> Output {
    let command = echo(args);
    // references are left out of the digest so that equal documents under
    // other names digest alike
    let mut params = command.clone();
    for key in ["ring", "module", "module2"] {
        params.as_object_mut().expect("echo is an object").remove(key);
    }
    let (report, table) = match commands::execute(args) {
        Ok(done) => {
            let inputs = json!({ "params": params, "inputs": done.inputs });
            (Report::new(command, &inputs, done.window, done.result, done.verdict), done.table)
        }
        Err(e) => {
            let verdict = if e.is_inconclusive() { Verdict::Inconclusive } else { Verdict::Error };
            let inputs = json!({ "params": params });
            (Report::new(command, &inputs, None, json!({ "error": e.to_string() }), verdict), None)
        }
    };
    let text = match args.out {
        OutFormat::Json => report.to_json(),
        OutFormat::Table => table_text(&report, table.as_deref()),
    };
    let diagnostic = report.result.get("error").and_then(Value::as_str).map(str::to_string);
    Output { code: report.exit_code(), text, diagnostic, report }
}

fn table_text(report: &Report, table: Option<&str>) -> String {
    let verdict = serde_json::to_value(report.verdict).unwrap_or_default();
    let mut out = format!("verdict: {}\n", verdict.as_str().unwrap_or_default());
    if let Some(t) = table {
        out.push_str(t);
    } else {
        out.push_str(&serde_json::to_string_pretty(&report.result).unwrap_or_default());
        out.push('\n');
    }
    out
}

/// The command with its normalized parameters.
fn echo(args: &Args) -> Value {
    let name = args.command.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    json!({
        "name": name,
        "ring": args.ring,
        "module": args.module,
        "module2": args.module2,
        "window": args.window,
        "length": args.length,
        "at_primes": args.at_primes,
        "expr": args.expr,
        "sequence": args.sequence,
        "exponents": args.exponents,
        "bound": args.bound,
        "power_bound": args.power_bound,
        "group": args.group,
        "root": args.root,
        "abutment": args.abutment,
        "seed": args.seed,
        "certificate": args.certificate.as_ref().map(|p| p.display().to_string()),
    })
}

pub(crate) fn parse_window(text: Option<&str>, default: (i64, i64)) -> Result<(i64, i64)> {
    let window = match text {
        None => default,
        Some(t) => {
            let bad = || Error::InvalidInput(format!("window {t:?} is not of the form a:b"));
            let (a, b) = t.split_once(':').ok_or_else(bad)?;
            let (a, b) = (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?);
            if a > b {
                return Err(Error::InvalidInput(format!("empty window {a}:{b}")));
            }
            (a, b)
        }
    };
    let cap = match std::env::var(MAX_WINDOW_VAR) {
        Ok(v) => v.parse::<i64>().map_err(|_| Error::InvalidInput(format!("{MAX_WINDOW_VAR}={v:?} is not an integer")))?,
        Err(_) => DEFAULT_MAX_WINDOW,
    };
    if window.0.abs() > cap || window.1.abs() > cap {
        return Err(Error::InvalidInput(format!(
            "window {}:{} exceeds the cap {cap} set by {MAX_WINDOW_VAR}",
            window.0, window.1
        )));
    }
    Ok(window)
}

pub(crate) fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| Error::InvalidInput(format!("bad {what} {x:?}"))))
        .collect()
}

fn fixture_name(reference: &str) -> Option<&str> {
    reference.strip_prefix("fixture:")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn load_ring(reference: &str) -> Result<LoadedRing> {
    match fixture_name(reference) {
        Some(name) => Ok(LoadedRing { ring: fixtures::ring(name)?, base: fixtures::base_name(name).to_string() }),
        None => {
            let ring = parse_ring_document(&read(Path::new(reference))?)?;
            Ok(LoadedRing { ring, base: file_base(reference) })
        }
    }
}

fn file_base(path: &str) -> String {
    Path::new(path).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.to_string())
}

/// Base name of a ring reference written inside a module document.
fn reference_base(reference: &str) -> String {
    match fixture_name(reference) {
        Some(name) => fixtures::base_name(name).to_string(),
        None if fixtures::rings().iter().any(|f| f.name == fixtures::base_name(reference)) => {
            fixtures::base_name(reference).to_string()
        }
        None => file_base(reference),
    }
}

fn check_base(declared: &str, ring: &LoadedRing) -> Result<()> {
    let base = reference_base(declared);
    if base == ring.base {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("module is over {declared:?} but --ring is {:?}", ring.base)))
    }
}

/// Loads a module; with `ring` given, the module's own ring reference must
/// have the same base name and the module is read over `ring`.
pub(crate) fn load_module(reference: &str, ring: Option<&LoadedRing>) -> Result<Module> {
    match fixture_name(reference) {
        Some(name) => {
            let own = fixtures::module(name)?;
            match ring {
                None => Ok(own),
                Some(r) => {
                    let info = fixtures::modules()
                        .iter()
                        .find(|f| f.name == fixtures::base_name(name))
                        .expect("fixture module exists");
                    check_base(info.ring.expect("module fixtures name a ring"), r)?;
                    if **own.ring() == *r.ring {
                        Ok(own)
                    } else {
                        own.base_change(&r.ring)
                    }
                }
            }
        }
        None => {
            let path = Path::new(reference);
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
            let text = read(path)?;
            let (_, m) = parse_module_document(&text, |declared| match ring {
                Some(r) => check_base(declared, r).map(|_| r.ring.clone()),
                None => match fixture_name(declared) {
                    Some(name) => fixtures::ring(name),
                    None if fixtures::rings().iter().any(|f| f.name == fixtures::base_name(declared)) => {
                        fixtures::ring(declared)
                    }
                    None => Ok(load_ring(&dir.join(declared).to_string_lossy())?.ring),
                },
            })?;
            Ok(m)
        }
    }
}

/// Canonical documents of the inputs, for the digest.
pub(crate) fn ring_input(r: &Ring) -> Value {
    ring_document(r)
}

pub(crate) fn module_input(m: &Module) -> Value {
    json!({ "ring": ring_document(m.ring()), "module": module_document(m, "") })
}
