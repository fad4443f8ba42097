//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, BoundQuery};
use crate::channel::{run_trials, ErrorModel, TrialConfig, TrialReport};
use crate::error::{Error, Result};
use crate::example1;
use crate::format::{self, SchemeFile};
use crate::psmc::{Message, PsmcScheme, StuckProfile};

#[derive(Parser, Debug)]
#[command(
    name = "psmc",
    version,
    about = "Masking codes for partially stuck memory cells"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sphere-packing bounds over a (n, u, t) grid.
    Bounds(BoundsArgs),
    /// GV-style maximum distance table and greedy construction.
    Gv(GvArgs),
    /// Encode a message file into a codeword.
    Encode(EncodeArgs),
    /// Decode a received word into its message.
    Decode(DecodeArgs),
    /// Monte Carlo encode / corrupt / decode trials.
    Simulate(SimulateArgs),
    /// Validate a scheme file and report its parameters.
    Verify(SchemeArg),
    /// Replay the built-in GF(4) example.
    Example1(Example1Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Nonoverlap,
    Overlap,
}

impl From<Model> for ErrorModel {
    fn from(m: Model) -> ErrorModel {
        match m {
            Model::Nonoverlap => ErrorModel::NonOverlapping,
            Model::Overlap => ErrorModel::Overlapping,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Human,
}

/// Inclusive range `lo:hi` (empty when `lo > hi`) or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Span, String> {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad number '{x}'"))
        };
        match s.split_once(':') {
            Some((a, b)) => Ok(Span {
                lo: num(a)?,
                hi: num(b)?,
            }),
            None => {
                let v = num(s)?;
                Ok(Span { lo: v, hi: v })
            }
        }
    }
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// Code length, a value or a `lo:hi` range.
    #[arg(long, conflicts_with = "lambda", required_unless_present = "lambda")]
    pub n: Option<Span>,
    /// Use the length `(q^λ - 1) / (q - 1)`.
    #[arg(long)]
    pub lambda: Option<u32>,
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value = "0")]
    pub u: Span,
    #[arg(long, default_value = "0")]
    pub t: Span,
    /// Level of every stuck cell.
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long, value_enum, default_value = "nonoverlap")]
    pub model: Model,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct GvArgs {
    #[arg(long)]
    pub q: u32,
    /// Final length for the maximum-distance table.
    #[arg(long)]
    pub n_f: Option<usize>,
    /// Final dimension, a value or a `lo:hi` range.
    #[arg(long)]
    pub k_f: Option<Span>,
    /// Also run the greedy construction and write its parity-check matrix.
    #[arg(long)]
    pub construct: bool,
    /// Construction length (defaults to `n_f - 1`).
    #[arg(long)]
    pub n: Option<usize>,
    /// Construction dimension (defaults to `k_f + d_max - 2`).
    #[arg(long)]
    pub k: Option<usize>,
    /// Construction distance (defaults to `d_max`).
    #[arg(long)]
    pub d: Option<usize>,
    /// Where to write the constructed matrix (stdout when absent).
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SchemeArg {
    /// Scheme file; the built-in GF(4) example when absent.
    #[arg(long)]
    pub scheme: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub scheme: SchemeArg,
    /// Two lines: the k1 free symbols, then the l masking-alphabet symbols.
    #[arg(long)]
    pub message: PathBuf,
    /// Comma-separated stuck positions (level 1).
    #[arg(long, default_value = "")]
    pub stuck: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub scheme: SchemeArg,
    /// One line with the received word.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Exact number of errors per trial, a value or `lo:hi`; defaults to `0:t`.
    #[arg(long = "errors")]
    pub errors: Option<Span>,
    #[arg(long, value_enum, default_value = "nonoverlap")]
    pub model: Model,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct Example1Args {
    /// Write the example as a scheme file.
    #[arg(long)]
    pub scheme_out: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_path(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_path(path, text),
        None => {
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn load_scheme(arg: &SchemeArg) -> Result<PsmcScheme> {
    match &arg.scheme {
        None => example1::scheme(),
        Some(path) => format::parse_scheme(&read_file(path)?)?.build(),
    }
}

pub const BOUNDS_HEADER: &str = "n,q,u,t,s,model,sphere_size,rhs,max_cardinality,k_info";
pub const GV_HEADER: &str = "n_f,k_f,q,d_max";

fn cmd_bounds(args: &BoundsArgs) -> Result<String> {
    let lengths = match (args.n, args.lambda) {
        (Some(n), _) => n,
        (None, Some(lambda)) => {
            if args.q < 2 {
                return Err(Error::InvalidBoundQuery("q must be at least 2".into()));
            }
            let q = u64::from(args.q);
            let n = q
                .checked_pow(lambda)
                .map(|p| (p - 1) / (q - 1))
                .and_then(|n| usize::try_from(n).ok())
                .ok_or_else(|| Error::InvalidBoundQuery("length overflows".into()))?;
            Span { lo: n, hi: n }
        }
        (None, None) => unreachable!("clap requires --n or --lambda"),
    };
    let model: ErrorModel = args.model.into();
    let mut out = String::new();
    if args.output.format == OutputFormat::Csv {
        out.push_str(BOUNDS_HEADER);
        out.push('\n');
    }
    for n in lengths.iter() {
        for u in args.u.iter() {
            for t in args.t.iter() {
                let query = BoundQuery::uniform(n, args.q, u, t, args.s, model);
                let r = bounds::evaluate(&query)?;
                let k = bounds::format_k_info(r.k_info);
                match args.output.format {
                    OutputFormat::Csv => out.push_str(&format!(
                        "{n},{},{u},{t},{},{model},{},{},{},{k}\n",
                        args.q, args.s, r.sphere_size, r.rhs, r.max_cardinality
                    )),
                    OutputFormat::Human => out.push_str(&format!(
                        "n={n} q={} u={u} t={t} s={} model={model}: k_info={k} max_cardinality={}\n",
                        args.q, args.s, r.max_cardinality
                    )),
                }
            }
        }
    }
    Ok(out)
}

fn cmd_gv(args: &GvArgs) -> Result<String> {
    let mut out = String::new();
    let mut last = None;
    if let Some(n_f) = args.n_f {
        let k_f = args.k_f.unwrap_or(Span { lo: 1, hi: n_f });
        if args.output.format == OutputFormat::Csv {
            out.push_str(GV_HEADER);
            out.push('\n');
        }
        for k in k_f.iter() {
            let d = bounds::gv_max_d(n_f, k, args.q)?;
            match args.output.format {
                OutputFormat::Csv => out.push_str(&format!("{n_f},{k},{},{d}\n", args.q)),
                OutputFormat::Human => {
                    out.push_str(&format!("n_f={n_f} k_f={k} q={}: d_max={d}\n", args.q))
                }
            }
            last = Some((n_f, k, d));
        }
    }
    if !args.construct {
        return Ok(out);
    }
    let derived = last.map(|(n_f, k_f, d)| (n_f - 1, (k_f + d).saturating_sub(2), d));
    let pick = |explicit: Option<usize>, from: Option<usize>, name: &str| {
        explicit.or(from).ok_or_else(|| {
            Error::InvalidBoundQuery(format!("--construct needs --{name} or an --n-f/--k-f row"))
        })
    };
    let n = pick(args.n, derived.map(|x| x.0), "n")?;
    let k = pick(args.k, derived.map(|x| x.1), "k")?;
    let d = pick(args.d, derived.map(|x| x.2), "d")?;
    let c = bounds::gv_construct(n, k, d, args.q)?;
    let verdict = bounds::verify_construction(&c)?;
    let mut text = format!(
        "# greedy construction for n={n} k={k} d={d} q={}\n# n'={} k'={} rank={} parity {}\n# verified: {}\n",
        args.q,
        c.n_prime,
        c.k_prime,
        c.rank,
        if c.parity_appended { "appended" } else { "absorbed" },
        verdict.passed()
    );
    text.push_str(&format::write_matrix(&c.h));
    match &args.matrix_out {
        Some(path) => write_path(path, &text)?,
        None => out.push_str(&text),
    }
    if !verdict.passed() {
        return Err(Error::InvalidCode(format!(
            "construction failed verification: {verdict:?}"
        )));
    }
    Ok(out)
}

fn cmd_encode(args: &EncodeArgs) -> Result<String> {
    let scheme = load_scheme(&args.scheme)?;
    let vectors = format::parse_vectors(&read_file(&args.message)?)?;
    if vectors.len() != 2 {
        return Err(Error::Parse {
            line: 0,
            msg: format!("message file needs 2 lines, found {}", vectors.len()),
        });
    }
    let message = Message {
        free: vectors[0].clone(),
        restricted: vectors[1].clone(),
    };
    let positions = format::parse_index_list(&args.stuck)?;
    let stuck = StuckProfile::uniform(scheme.length(), positions, 1)?;
    let c = scheme.encode(&message, &stuck)?;
    Ok(format!("{}\n", format::format_vector(&c)))
}

fn cmd_decode(args: &DecodeArgs) -> Result<String> {
    let scheme = load_scheme(&args.scheme)?;
    let vectors = format::parse_vectors(&read_file(&args.input)?)?;
    if vectors.len() != 1 {
        return Err(Error::Parse {
            line: 0,
            msg: format!("received-word file needs 1 line, found {}", vectors.len()),
        });
    }
    let m = scheme.decode(&vectors[0])?;
    Ok(format!(
        "{}\n{}\n",
        format::format_vector(&m.free),
        format::format_vector(&m.restricted)
    ))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let scheme = load_scheme(&args.scheme)?;
    let errors = args.errors.unwrap_or(Span {
        lo: 0,
        hi: scheme.params().t,
    });
    let mut out = String::new();
    if args.output.format == OutputFormat::Csv {
        out.push_str(TrialReport::CSV_HEADER);
        out.push('\n');
    }
    for t_actual in errors.iter() {
        let report = run_trials(
            &scheme,
            TrialConfig {
                trials: args.trials,
                t_actual,
                model: args.model.into(),
                seed: args.seed,
            },
        )?;
        match args.output.format {
            OutputFormat::Csv => out.push_str(&report.csv_row()),
            OutputFormat::Human => out.push_str(&format!(
                "trials={} t_actual={} model={} seed={}: masking_violations={} decode_failures={} message_mismatches={}",
                report.trials,
                report.t_actual,
                report.model,
                report.seed,
                report.masking_violations,
                report.decode_failures,
                report.message_mismatches
            )),
        }
        out.push('\n');
    }
    Ok(out)
}

/// Checks in the order the scheme builder performs them.
const VERIFY_CHECKS: [&str; 6] = [
    "field",
    "dimensions",
    "h0 binary",
    "h0 systematic",
    "masking distance",
    "code distance",
];

fn failed_check(e: &Error) -> Option<usize> {
    match e {
        Error::NotCharacteristicTwo(_) => Some(0),
        Error::SchemeDimensions(msg) if msg.contains("degree") => Some(0),
        Error::SchemeDimensions(_) => Some(1),
        Error::H0NotBinary { .. } => Some(2),
        Error::H0NotSystematic(_) => Some(3),
        Error::MaskingDistanceTooSmall { .. } => Some(4),
        Error::CodeDistanceTooSmall { .. }
        | Error::SyndromeCollision { .. }
        | Error::InvalidCode(_) => Some(5),
        _ => None,
    }
}

/// Reports each precondition; the verdict is exactly the builder's.
fn cmd_verify(args: &SchemeArg) -> Result<(String, i32)> {
    let file = match &args.scheme {
        None => SchemeFile {
            field: example1::field(),
            params: example1::PARAMS,
            h0: example1::h0(),
            p: example1::p(),
        },
        Some(path) => format::parse_scheme(&read_file(path)?)?,
    };
    let mut out = String::new();
    match file.build() {
        Ok(s) => {
            for name in VERIFY_CHECKS {
                out.push_str(&format!("PASS {name}\n"));
            }
            let p = s.params();
            out.push_str(&format!(
                "n={} u={} t={} l={} k1={} r={} u0={} d={} d0={} message_bits={}\n",
                p.n,
                p.u,
                p.t,
                p.l,
                p.k1,
                p.r,
                s.u0(),
                s.distance(),
                s.masking_distance(),
                s.message_bits()
            ));
            Ok((out, 0))
        }
        Err(e) => {
            let Some(failed) = failed_check(&e) else {
                return Err(e);
            };
            for (i, name) in VERIFY_CHECKS.iter().enumerate() {
                let line = match i.cmp(&failed) {
                    std::cmp::Ordering::Less => format!("PASS {name}"),
                    std::cmp::Ordering::Equal => format!("FAIL {name}: {e}"),
                    std::cmp::Ordering::Greater => format!("SKIP {name}"),
                };
                out.push_str(&line);
                out.push('\n');
            }
            Ok((out, e.exit_code()))
        }
    }
}

fn cmd_example1(args: &Example1Args) -> Result<(String, i32)> {
    if let Some(path) = &args.scheme_out {
        let text = format::write_scheme(
            &example1::field(),
            example1::PARAMS,
            &example1::h0(),
            &example1::p(),
        );
        write_path(path, &text)?;
    }
    let report = example1::run()?;
    let mut out = report.render();
    if report.passed() {
        return Ok((out, 0));
    }
    out.push_str(&format!(
        "failed checks: {}\n",
        report.failures().join(", ")
    ));
    Ok((out, 2))
}

/// Runs one command and returns the process exit status.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Bounds(a) => cmd_bounds(a)
            .and_then(|s| emit(&a.output.out, &s, stdout))
            .map(|_| 0),
        Command::Gv(a) => cmd_gv(a)
            .and_then(|s| emit(&a.output.out, &s, stdout))
            .map(|_| 0),
        Command::Encode(a) => cmd_encode(a)
            .and_then(|s| emit(&a.out, &s, stdout))
            .map(|_| 0),
        Command::Decode(a) => cmd_decode(a)
            .and_then(|s| emit(&a.out, &s, stdout))
            .map(|_| 0),
        Command::Simulate(a) => cmd_simulate(a)
            .and_then(|s| emit(&a.output.out, &s, stdout))
            .map(|_| 0),
        Command::Verify(a) => {
            cmd_verify(a).and_then(|(s, code)| emit(&None, &s, stdout).map(|_| code))
        }
        Command::Example1(a) => {
            cmd_example1(a).and_then(|(s, code)| emit(&None, &s, stdout).map(|_| code))
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
