//! The `cohn` command line.
//!
//! Exit codes: 0 success, 1 a verification came out false, 2 bad input,
//! 3 a theorem-violation signal (recognition failure, stage failure on a Cohn
//! function, or a Biro sum that holds without a matching power).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::characters::{
    character_table, is_cohn, Character, CharacterError, CohnVerdict, FunctionTable,
};
use crate::counterexample::find_counterexamples;
use crate::finite_field::make_field;
use crate::proofcheck::{full_trace, ProofError};
use crate::reduction::{biro_check, build_reduction, reduce_function, ReductionError};
use crate::search::{
    enumerate_cohn_parallel, expected_solution_set, merge_shards, write_csv_summary, SearchConfig,
    SearchError, SearchReport, Shard, Strategy, DEFAULT_CEILING, DEFAULT_TOLERANCE,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cohn",
    version,
    about = "Search and verify Cohn functions over finite fields"
)]
pub struct Cli {
    /// Print the JSON report on stdout instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate all Cohn functions F_p -> mu_m and compare with the characters.
    Search {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        m: u64,
        #[arg(long, default_value = "exhaustive")]
        strategy: Strategy,
        /// Run one shard, written `i/total`.
        #[arg(long, value_parser = parse_shard)]
        shard: Option<Shard>,
        #[arg(long, default_value_t = 1)]
        threads: u64,
        #[arg(long, default_value_t = DEFAULT_CEILING)]
        ceiling: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Also write a one-line CSV summary.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Merge shard reports written by `search --shard`.
    Merge {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Check whether a function table is Cohn.
    Verify { file: PathBuf },
    /// Run the proof trace on a Cohn function over a prime field.
    Trace { file: PathBuf },
    /// Compose the injective character of F_{p^k} with every linear map fixing 1.
    Counterexample {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        k: usize,
    },
    /// Reduce a table with values in mu_n to F_{p^d} and run the Biro sum test.
    Reduce {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: u64,
        file: PathBuf,
    },
    /// Emit the table of the character chi_A on F_{p^k} with values in mu_m.
    Character {
        #[arg(short)]
        p: u64,
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[arg(short)]
        a: u64,
        #[arg(short)]
        m: u64,
    },
}

fn parse_shard(s: &str) -> Result<Shard, String> {
    let (i, t) = s.split_once('/').ok_or("expected i/total")?;
    let index = i
        .trim()
        .parse()
        .map_err(|_| format!("bad shard index `{i}`"))?;
    let total = t
        .trim()
        .parse()
        .map_err(|_| format!("bad shard total `{t}`"))?;
    if total == 0 || index >= total {
        return Err(format!("need 0 <= i < total, got {index}/{total}"));
    }
    Ok(Shard { index, total })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    pub code: u8,
    /// Pretty-printed JSON report, fields in declaration order.
    pub report: Option<String>,
    pub lines: Vec<String>,
}

impl CommandOutcome {
    fn new(code: u8, report: impl Serialize, lines: Vec<String>) -> Self {
        let report = serde_json::to_string_pretty(&report).expect("reports serialize");
        CommandOutcome {
            code,
            report: Some(report),
            lines,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl ToString) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        let code = match e {
            SearchError::KernelDisagreement(_) => EXIT_FALSE,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<CharacterError> for CliError {
    fn from(e: CharacterError) -> Self {
        CliError::usage(e)
    }
}

impl From<ProofError> for CliError {
    fn from(e: ProofError) -> Self {
        let code = match &e {
            e if e.is_theorem_violation() => EXIT_VIOLATION,
            ProofError::NotCohn(_) => EXIT_FALSE,
            _ => EXIT_USAGE,
        };
        let message = match &e {
            ProofError::StageFailed { value: Some(v), .. } => format!("{e} (offending value {v})"),
            _ => e.to_string(),
        };
        CliError { code, message }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        let code = match e {
            ReductionError::TheoremViolation { .. } => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("cannot parse {}: {e}", path.display())))
}

fn search_banner(report: &SearchReport) -> Result<(u8, Vec<String>), CliError> {
    let c = &report.config;
    let mut lines = vec![format!(
        "p = {}, m = {}, {:?}: {} solutions among {} candidates ({} passed the first stage)",
        c.p,
        c.m,
        c.strategy,
        report.solutions.len(),
        report.candidates_examined,
        report.screen_survivors
    )];
    if let Some(s) = c.shard {
        lines.push(format!(
            "shard {}/{}: partial result, merge shards to compare",
            s.index, s.total
        ));
        return Ok((EXIT_OK, lines));
    }
    let expected = expected_solution_set(c.p, c.m)?;
    let matched = expected == report.solutions;
    lines.push(format!(
        "expected {} (gcd(m, p-1) - 1): {}",
        expected.len(),
        if matched { "MATCH" } else { "MISMATCH" }
    ));
    Ok((if matched { EXIT_OK } else { EXIT_FALSE }, lines))
}

/// Runs one command without printing anything.
pub fn execute(command: &Command) -> Result<CommandOutcome, CliError> {
    match command {
        Command::Search {
            p,
            m,
            strategy,
            shard,
            threads,
            ceiling,
            tolerance,
            csv,
        } => {
            let mut config = SearchConfig::new(*p, *m, *strategy);
            config.shard = *shard;
            config.ceiling = *ceiling;
            config.screen_tolerance = *tolerance;
            let report = if shard.is_some() {
                crate::search::enumerate_cohn(&config)?
            } else {
                enumerate_cohn_parallel(&config, *threads)?
            };
            if let Some(path) = csv {
                let file = fs::File::create(path).map_err(|e| {
                    CliError::usage(format!("cannot write {}: {e}", path.display()))
                })?;
                write_csv_summary(std::slice::from_ref(&report), file)?;
            }
            let (code, lines) = search_banner(&report)?;
            Ok(CommandOutcome::new(code, &report, lines))
        }
        Command::Merge { files } => {
            let reports = files
                .iter()
                .map(|f| read_json(f))
                .collect::<Result<Vec<SearchReport>, _>>()?;
            let merged = merge_shards(&reports)?;
            let (code, lines) = search_banner(&merged)?;
            Ok(CommandOutcome::new(code, &merged, lines))
        }
        Command::Verify { file } => {
            let f: FunctionTable = read_json(file)?;
            let verdict = is_cohn(&f);
            let (report, line) = match &verdict {
                CohnVerdict::Holds => (json!({ "is_cohn": true }), "Cohn: yes".to_string()),
                CohnVerdict::NotNormalized(why) => (
                    json!({ "is_cohn": false, "normalization": format!("{why:?}") }),
                    format!("Cohn: no, not normalized ({why:?})"),
                ),
                CohnVerdict::Violation { shift, value } => (
                    json!({ "is_cohn": false, "shift": shift.coords(), "autocorrelation": value }),
                    format!(
                        "Cohn: no, autocorrelation at shift {:?} is {value}",
                        shift.coords()
                    ),
                ),
            };
            let code = if verdict.holds() { EXIT_OK } else { EXIT_FALSE };
            Ok(CommandOutcome::new(code, report, vec![line]))
        }
        Command::Trace { file } => {
            let f: FunctionTable = read_json(file)?;
            let trace = full_trace(&f)?;
            let mut lines: Vec<String> = trace
                .stages
                .iter()
                .map(|s| {
                    format!(
                        "{:<28} {}",
                        s.stage,
                        if s.verdict { "ok" } else { "FAILED" }
                    )
                })
                .collect();
            lines.push(format!("A = {}", trace.terminal_a));
            Ok(CommandOutcome::new(EXIT_OK, &trace, lines))
        }
        Command::Counterexample { p, k } => {
            let reports = find_counterexamples(*p, *k)?;
            let counterexamples = reports.iter().filter(|r| r.is_counterexample()).count();
            let all_cohn = reports.iter().all(|r| r.verdicts.is_cohn);
            let counts = reports.first().map(|r| r.counts);
            let mut lines = vec![format!(
                "F_{}^{}: {} maps fixing 1, {} composites Cohn, {} not multiplicative",
                p,
                k,
                reports.len(),
                reports.iter().filter(|r| r.verdicts.is_cohn).count(),
                counterexamples
            )];
            if let Some(c) = counts {
                lines.push(format!(
                    "stabilizer maps {} vs injective characters {}",
                    c.stabilizer_maps, c.injective_characters
                ));
            }
            let code = if all_cohn && counterexamples > 0 {
                EXIT_OK
            } else {
                EXIT_FALSE
            };
            Ok(CommandOutcome::new(code, &reports, lines))
        }
        Command::Reduce { p, n, file } => {
            let f: FunctionTable = read_json(file)?;
            if f.field().p() != *p {
                return Err(CliError::usage(format!(
                    "table is over F_{}, not F_{p}",
                    f.field().p()
                )));
            }
            let map = build_reduction(*n, *p)?;
            let seq = reduce_function(&f, &map)?;
            let a = biro_check(&seq)?;
            let line = match a {
                Some(a) => format!(
                    "Biro A = {a} (omega = {:?} in F_{}^{})",
                    map.omega().coords(),
                    p,
                    map.d()
                ),
                None => "Biro sum condition fails".to_string(),
            };
            let code = if a.is_some() { EXIT_OK } else { EXIT_FALSE };
            Ok(CommandOutcome::new(
                code,
                json!({ "sequence": seq, "biro_a": a }),
                vec![line],
            ))
        }
        Command::Character { p, k, a, m } => {
            let field = make_field(*p, *k).map_err(CharacterError::from)?;
            let table = character_table(&Character::new(&field, *a)?, *m)?;
            let line = format!("chi_{a} on F_{p}^{k} in mu_{m}: {:?}", table.exponents());
            Ok(CommandOutcome::new(EXIT_OK, &table, vec![line]))
        }
    }
}

/// Runs the parsed command, writes its outputs and returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message);
            return e.code;
        }
    };
    if let Some(text) = &outcome.report {
        if let Some(path) = &cli.out {
            if let Err(e) = fs::write(path, format!("{text}\n")) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        if cli.json {
            println!("{text}");
        }
    }
    if !cli.json && !cli.quiet {
        let mut stdout = std::io::stdout().lock();
        for line in &outcome.lines {
            let _ = writeln!(stdout, "{line}");
        }
    }
    outcome.code
}
