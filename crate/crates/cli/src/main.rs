use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ascent_core::classify::{run_sweep, CheckError, CheckKind, CheckStatus, Finding, QuantifiedCheckReport};
use ascent_core::indices::index_report;
use ascent_core::io::{parse_map_file, parse_matrix, IoError};
use ascent_core::preserver::{find_violation, verify_preservation, IndexKind, Mode, PreserverError, DEFAULT_BUDGET};
use ascent_core::witness::{build_lemma_12, build_lemma_125, build_lemma_13, build_lemma_list, WitnessBundle, WitnessError};
use ascent_core::{Field, FieldElem};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exact ascent and descent of matrices, lemma witnesses, exhaustive sweeps
/// and preserver checks.
#[derive(Parser)]
#[command(name = "ascent", version)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; output does not depend on it.
    #[arg(long, global = true, env = "ASCENT_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ascent, descent, chain dimensions and minimal polynomial of a matrix file.
    Indices { file: PathBuf },
    /// Rebuild a lemma's witness matrices and recheck its claims.
    Lemma(LemmaArgs),
    /// Sweep a characterization over every matrix of M_n(GF(q)).
    Exhaustive {
        check: CheckKind,
        #[arg(long)]
        field: Field,
        #[arg(long)]
        dim: usize,
    },
    /// Check a map against the triple-product index identities.
    Preserver(PreserverArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaTag {
    #[value(name = "list")]
    List,
    #[value(name = "12")]
    Twelve,
    #[value(name = "125")]
    OneTwentyFive,
    #[value(name = "13")]
    Thirteen,
}

#[derive(Args)]
struct LemmaArgs {
    tag: LemmaTag,
    #[arg(long, default_value = "Q")]
    field: Field,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sampled,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Ascent,
    Descent,
    Both,
}

#[derive(Args)]
struct PreserverArgs {
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "sampled")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled pairs.
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
    #[arg(long, value_enum, default_value = "both")]
    which: WhichArg,
    /// Search for a violating pair instead of verifying.
    #[arg(long)]
    violate: bool,
    /// Pairs tried by --violate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Debug)]
enum CliError {
    /// Bad input; exit 2.
    Input(String),
    /// The run completed and its verdict is negative; exit 1.
    Negative,
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PreserverError> for CliError {
    fn from(e: PreserverError) -> Self {
        CliError::Input(e.to_string())
    }
}

struct Output {
    text: String,
}

impl Output {
    fn line<T: Serialize>(&mut self, value: &T) {
        self.text.push_str(&serde_json::to_string(value).expect("reports serialize"));
        self.text.push('\n');
    }

    fn flush(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => fs::write(p, &self.text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(self.text.as_bytes())
                .map_err(|e| CliError::Input(e.to_string())),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn param(field: Field, name: &str, value: &Option<String>) -> Result<FieldElem, CliError> {
    let text = value
        .as_deref()
        .ok_or_else(|| CliError::Input(format!("this lemma needs --{name}")))?;
    FieldElem::parse(field, text).map_err(|e| CliError::Input(format!("--{name}: {e}")))
}

#[derive(Serialize)]
struct LemmaReport<'a> {
    #[serde(flatten)]
    bundle: &'a WitnessBundle,
    verified: bool,
}

fn cmd_lemma(args: &LemmaArgs, out: &mut Output) -> Result<(), CliError> {
    let f = args.field;
    let bundle = match args.tag {
        LemmaTag::List => build_lemma_list(&param(f, "a", &args.a)?, &param(f, "b", &args.b)?)?,
        LemmaTag::Twelve => build_lemma_12(&param(f, "u", &args.u)?, &param(f, "v", &args.v)?)?,
        LemmaTag::OneTwentyFive => build_lemma_125(f)?,
        LemmaTag::Thirteen => build_lemma_13(
            &param(f, "a", &args.a)?,
            &param(f, "b", &args.b)?,
            &param(f, "w", &args.w)?,
        )?,
    };
    let verified = bundle.all_hold();
    out.line(&LemmaReport { bundle: &bundle, verified });
    for c in bundle.claims.iter().filter(|c| !c.holds) {
        eprintln!("claim failed: {}: expected {}, got {}", c.statement, c.expected, c.actual);
    }
    if verified {
        Ok(())
    } else {
        Err(CliError::Negative)
    }
}

#[derive(Serialize)]
struct FindingLine<'a> {
    record: &'static str,
    #[serde(flatten)]
    finding: &'a Finding,
}

#[derive(Serialize)]
struct SweepSummary<'a> {
    record: &'static str,
    field: Field,
    dim: usize,
    predicate: &'a str,
    total_a_tested: u64,
    quantifier_range: u64,
    exhaustive: bool,
    predicate_true: u64,
    condition_true: u64,
    forward_violations: usize,
    converse_gaps: usize,
    status: CheckStatus,
}

fn write_sweep(report: &QuantifiedCheckReport, out: &mut Output) {
    for (record, list) in [("forward_violation", &report.forward_violations), ("converse_gap", &report.converse_gaps)] {
        for finding in list {
            out.line(&FindingLine { record, finding });
        }
    }
    out.line(&SweepSummary {
        record: "summary",
        field: report.field,
        dim: report.dim,
        predicate: &report.predicate,
        total_a_tested: report.total_a_tested,
        quantifier_range: report.quantifier_range,
        exhaustive: report.exhaustive,
        predicate_true: report.predicate_true,
        condition_true: report.condition_true,
        forward_violations: report.forward_violations.len(),
        converse_gaps: report.converse_gaps.len(),
        status: report.status,
    });
}

fn cmd_preserver(args: &PreserverArgs, out: &mut Output) -> Result<(), CliError> {
    let map = parse_map_file(&read(&args.spec)?)?;
    if args.violate {
        let search = find_violation(map.as_map(), args.budget, args.seed)?;
        out.line(&search);
        return if search.violation.is_some() { Ok(()) } else { Err(CliError::Negative) };
    }
    let mode = match args.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Sampled => Mode::Sampled { seed: args.seed, pairs: args.pairs },
    };
    let which = match args.which {
        WhichArg::Ascent => IndexKind::Ascent,
        WhichArg::Descent => IndexKind::Descent,
        WhichArg::Both => IndexKind::Both,
    };
    let report = verify_preservation(map.as_map(), mode, which)?;
    out.line(&report);
    if report.verified() {
        Ok(())
    } else {
        Err(CliError::Negative)
    }
}

fn run(cli: &Cli, out: &mut Output) -> Result<(), CliError> {
    match &cli.command {
        Command::Indices { file } => {
            let m = parse_matrix(&read(file)?)?;
            let report = index_report(&m).map_err(|e| CliError::Input(e.to_string()))?;
            out.line(&report);
            Ok(())
        }
        Command::Lemma(args) => cmd_lemma(args, out),
        Command::Exhaustive { check, field, dim } => {
            let report = run_sweep(*check, *field, *dim, cli.jobs)?;
            write_sweep(&report, out);
            match report.status {
                CheckStatus::Failed => Err(CliError::Negative),
                _ => Ok(()),
            }
        }
        Command::Preserver(args) => cmd_preserver(args, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // Only the first pool configuration wins; there is no other.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let mut out = Output { text: String::new() };
    let result = run(&cli, &mut out);
    if !matches!(result, Err(CliError::Input(_))) {
        if let Err(CliError::Input(msg)) = out.flush(cli.out.as_deref()) {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Negative) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
