//! Command-line front end.
//!
//! Exit codes: 0 on success (negative verdicts included), 2 for malformed
//! input, 3 when the construction does not cover the requested `(N, B)`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::atlas::{emit, exception_census, census_with, Format};
use crate::dry::{corollary_lower_bound_holds, is_dry, CandidateClass, DryEvaluation};
use crate::error::Error;
use crate::picard::{BaseSurface, DivClass};
use crate::rational::serde_q;
use crate::witness::{audit_witness, case_table, realize, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "drycert", version, about = "Exact DRY-class certificates on elliptic Calabi-Yau threefolds")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Intersection data and cones of a base surface.
    Cones { base: String },
    /// Decide DRY membership of `phi sigma + omega`.
    CheckDry {
        base: String,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Build a witness bundle for a DRY class.
    Realize {
        base: String,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Re-audit a witness written by `realize`.
    Verify { file: PathBuf },
    /// Enumerate DRY classes left unrealized.
    Census {
        base: String,
        #[arg(long = "N")]
        rank: u32,
        #[arg(long, default_value = "json")]
        format: String,
        /// Override the cap on `phi.c1`.
        #[arg(long)]
        bound: Option<i64>,
    },
}

#[derive(clap::Args, Debug)]
struct ClassArgs {
    /// Comma-separated coefficients of phi.
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    #[arg(long, allow_hyphen_values = true)]
    omega: i64,
    #[arg(long = "N")]
    rank: u32,
}

/// File format shared by `realize` and `verify`.
#[derive(Debug, Serialize, Deserialize)]
pub struct RealizeOutput {
    pub base: BaseSurface,
    pub candidate: CandidateClass,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Serialize)]
struct DryOutput<'a> {
    base: &'a BaseSurface,
    candidate: &'a CandidateClass,
    dry: bool,
    evaluation: DryEvaluation,
    corollary_bound: Option<bool>,
}

#[derive(Serialize)]
struct ConesOutput<'a> {
    base: &'a BaseSurface,
    picard_rank: usize,
    gram: &'a [Vec<i128>],
    signature: (usize, usize, usize),
    c1: &'a DivClass,
    #[serde(with = "serde_q")]
    c1_squared: crate::rational::Q,
    mori_generators: &'a [DivClass],
    effective_generators: &'a [DivClass],
    toric: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    valid: bool,
    checks: serde_json::Map<String, serde_json::Value>,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported { .. } | Error::UnsupportedBase(_) => EXIT_UNSUPPORTED,
            _ => EXIT_MALFORMED,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_MALFORMED, msg: msg.into() }
}

fn parse_base(s: &str) -> Result<BaseSurface, Failure> {
    Ok(s.parse::<BaseSurface>()?)
}

fn parse_phi(s: &str) -> Result<DivClass, Failure> {
    let coeffs = s
        .split(',')
        .map(|t| t.trim().parse::<i128>().map_err(|_| malformed(format!("bad phi coefficient `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DivClass::from_ints(coeffs))
}

fn candidate(base: &BaseSurface, a: &ClassArgs) -> Result<CandidateClass, Failure> {
    let c = CandidateClass::new(parse_phi(&a.phi)?, a.omega, a.rank);
    c.validate(base)?;
    Ok(c)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn dispatch(cmd: &Command) -> Result<String, Failure> {
    match cmd {
        Command::Cones { base } => {
            let b = parse_base(base)?;
            Ok(json(&ConesOutput {
                base: &b,
                picard_rank: b.picard_rank(),
                gram: b.gram(),
                signature: b.signature(),
                c1: b.c1(),
                c1_squared: b.c1_squared(),
                mori_generators: b.mori_generators(),
                effective_generators: b.effective_generators(),
                toric: b.is_toric(),
            }))
        }
        Command::CheckDry { base, class } => {
            let b = parse_base(base)?;
            let c = candidate(&b, class)?;
            let (dry, evaluation) = is_dry(&c, &b);
            let corollary_bound = corollary_lower_bound_holds(&c, &b).ok();
            Ok(json(&DryOutput { base: &b, candidate: &c, dry, evaluation, corollary_bound }))
        }
        Command::Realize { base, class } => {
            let b = parse_base(base)?;
            let c = candidate(&b, class)?;
            if case_table(c.rank, &b).is_empty() {
                return Err(Error::Unsupported { rank: c.rank, base: b.to_string() }.into());
            }
            let verdict = realize(&c, &b);
            Ok(json(&RealizeOutput { base: b, candidate: c, verdict }))
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| malformed(format!("{}: {e}", file.display())))?;
            let doc: RealizeOutput =
                serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", file.display())))?;
            let Verdict::Realized { witness } = &doc.verdict else {
                return Err(malformed("file holds no witness"));
            };
            let audit = audit_witness(witness, &doc.candidate, &doc.base);
            let checks = audit.checks.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
            Ok(json(&VerifyOutput { valid: audit.passed(), checks }))
        }
        Command::Census { base, rank, format, bound } => {
            let b = parse_base(base)?;
            let format: Format = format.parse()?;
            if *rank == 0 {
                return Err(malformed("N must be at least 1"));
            }
            let report = match bound {
                None => exception_census(*rank, &b)?,
                Some(p) => census_with(*rank, &b, &case_table(*rank, &b), Some(*p))?,
            };
            Ok(emit(&report, format))
        }
    }
}

/// Run the CLI on `args` (program name first) and return the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_MALFORMED
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
