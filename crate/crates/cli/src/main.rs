//! `aggsem`: answer sets, verdicts, classifications and relationship checks
//! for propositional programs with aggregates.

mod commands;
mod source;

use std::io::Write;
use std::process::ExitCode;

use aggsem::analysis::Restriction;
use aggsem::semantics::SemanticsId;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Output;
use source::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "aggsem",
    version,
    about = "Answer-set semantics for programs with aggregates"
)]
struct Cli {
    /// Output format; json prints a single document per invocation
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate answer sets under one or more semantics
    Solve(SolveArgs),
    /// Decide whether an interpretation is an answer set
    Check(CheckArgs),
    /// Classify aggregate expressions and compute their bounds
    Classify(ClassifyArgs),
    /// Show where the semantics disagree on a program
    Compare(CompareArgs),
    /// Atom dependency graph, acyclicity and stratification
    Graph(GraphArgs),
    /// Check the containments between semantics on random programs
    Fuzz(FuzzArgs),
    /// List the bundled example programs or print one of them
    Corpus(CorpusArgs),
}

/// Comma separated semantics names; `all` expands to the five.
#[derive(Debug, Clone)]
pub struct SemanticsList(pub Vec<SemanticsId>);

fn parse_semantics(text: &str) -> Result<SemanticsList, String> {
    SemanticsId::parse_list(text)
        .map(SemanticsList)
        .map_err(|e| e.to_string())
}

/// Comma separated integers and inclusive ranges such as `-4..7`.
#[derive(Debug, Clone)]
pub struct BoundList(pub Vec<i64>);

const MAX_BOUNDS: usize = 10_000;

fn parse_bounds(text: &str) -> Result<BoundList, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let number = |s: &str| s.trim().parse::<i64>().map_err(|_| format!("'{s}' is not an integer"));
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (number(lo)?, number(hi)?);
                if hi.saturating_sub(lo) >= MAX_BOUNDS as i64 {
                    return Err(format!("range {part} has more than {MAX_BOUNDS} values"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(number(part)?),
        }
        if out.len() > MAX_BOUNDS {
            return Err(format!("more than {MAX_BOUNDS} bounds"));
        }
    }
    Ok(BoundList(out))
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Program file, or `-` for standard input
    pub file: String,
    #[arg(long, default_value = "all", value_parser = parse_semantics)]
    pub semantics: SemanticsList,
    /// Universe cap; raising it makes the work grow exponentially
    #[arg(long)]
    pub max_atoms: Option<usize>,
    /// Report every answer set (default)
    #[arg(long, conflicts_with = "first")]
    pub all: bool,
    /// Stop at the first answer set by cardinality, then lexicographic order
    #[arg(long)]
    pub first: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Program file, or `-` for standard input
    pub file: String,
    /// Candidate interpretation as comma separated atoms; "" is the empty set
    #[arg(long, allow_hyphen_values = true)]
    pub model: String,
    #[arg(long, default_value = "all", value_parser = parse_semantics)]
    pub semantics: SemanticsList,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Program file whose body expressions are classified, or `-`
    #[arg(required_unless_present = "expr", conflicts_with = "expr")]
    pub file: Option<String>,
    /// A single expression such as "sum{1:p, 2:q} >= 2"; repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Vec<String>,
    /// Also decide satisfiability with `= k` for each listed k, e.g. -4..7,9
    #[arg(long, allow_hyphen_values = true, value_parser = parse_bounds)]
    pub bound: Option<BoundList>,
    /// Atom cap for exact classification; raising it makes the work grow exponentially
    #[arg(long)]
    pub max_atoms: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Program file, or `-` for standard input
    pub file: String,
    /// Universe cap; raising it makes the work grow exponentially
    #[arg(long)]
    pub max_atoms: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Program file, or `-` for standard input
    pub file: String,
    /// Write the graph in DOT format to this path (`-` for standard output in text mode)
    #[arg(long)]
    pub dot: Option<String>,
}

#[derive(Args, Debug)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random programs
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Expression class allowed in the programs
    #[arg(long, default_value_t = Restriction::Arbitrary)]
    pub restriction: Restriction,
    /// Atoms per program (1 to 8)
    #[arg(long, default_value_t = 4)]
    pub atoms: usize,
    /// Maximum rules per program (0 to 10)
    #[arg(long, default_value_t = 5)]
    pub rules: usize,
    /// Only generate programs with an acyclic dependency graph
    #[arg(long)]
    pub acyclic: bool,
    /// Never generate constraints
    #[arg(long)]
    pub no_constraints: bool,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    /// Program to print; lists the names when omitted
    pub name: Option<String>,
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Check(args) => commands::check(&args),
        Command::Classify(args) => commands::classify(&args),
        Command::Compare(args) => commands::compare(&args),
        Command::Graph(args) => commands::graph(&args, cli.format),
        Command::Fuzz(args) => commands::fuzz(&args),
        Command::Corpus(args) => commands::corpus(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let output = match run(cli) {
        Ok(output) => output,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    let rendered = match format {
        Format::Text => output.text,
        Format::Json => match serde_json::to_string_pretty(&output.document) {
            Ok(json) => json + "\n",
            Err(e) => {
                eprintln!("error: cannot serialize the report: {e}");
                return ExitCode::from(2);
            }
        },
    };
    // a closed pipe is not worth a panic
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(rendered.as_bytes()).and_then(|()| stdout.flush());
    ExitCode::from(output.status)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_lists() {
        assert_eq!(parse_bounds("-4..-2, 9").unwrap().0, vec![-4, -3, -2, 9]);
        assert_eq!(parse_bounds("").unwrap().0, Vec::<i64>::new());
        assert!(parse_bounds("1..x").is_err());
        assert!(parse_bounds("0..100000").is_err());
        assert!(parse_bounds(&format!("{}..{}", i64::MIN, i64::MAX)).is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
