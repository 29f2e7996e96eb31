//! `expecta`: expectations, satisfiability and coherence from the command
//! line.
//!
//! Output is a JSON object on stdout (or `key: value` lines with `--text`).
//! Exit status: 0 on success (SAT and UNSAT alike), 1 on input or usage
//! errors, 2 when an internal invariant check fails.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expecta::decide::{DecideOptions, DEFAULT_MAX_PROPS};
use expecta::logic::DEFAULT_MAX_CLAUSES;
use expecta::semantics::Semantics;
use expecta::Error;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "expecta", version, about = "Expectation logics over probability, credal sets, belief functions and possibility measures")]
struct Cli {
    /// Print `key: value` lines instead of JSON.
    #[arg(long, global = true)]
    text: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expectation bounds of a gamble, or the truth of a formula, in a model.
    Eval(EvalArgs),
    /// Satisfiability of an expectation (or likelihood) formula.
    Sat(SatArgs),
    /// Validity of an expectation (or likelihood) formula.
    Valid(SatArgs),
    /// Satisfiability of a gamble-inequality formula over world structures.
    GambleSat(FormulaOnlyArgs),
    /// Satisfiability of a function-inequality formula.
    FuncSat(FuncSatArgs),
    /// Coherence of a lower-expectation assessment.
    Coherent(AssessmentArgs),
    /// Natural extension of a coherent assessment to a query gamble.
    Extend(ExtendArgs),
    /// Rewrites a formula (T1, T2, or likelihood-to-expectation).
    Translate(TranslateArgs),
    /// Checks a model document and lists every violated condition.
    ValidateModel(ModelArgs),
}

/// A formula given inline or read from a file.
#[derive(Args, Debug)]
struct FormulaInput {
    /// Formula text.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    formula: Option<String>,
    /// Read the formula from this file instead.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Limits {
    /// Largest number of propositions a decision may mention.
    #[arg(long, default_value_t = DEFAULT_MAX_PROPS)]
    max_props: usize,
    /// Largest number of clauses in a disjunctive normal form.
    #[arg(long, default_value_t = DEFAULT_MAX_CLAUSES)]
    max_clauses: usize,
    /// Re-check every linear system by elimination, every certificate, and
    /// every belief expectation by all routes.
    #[arg(long)]
    oracle: bool,
    /// Include every linear system solved in the output.
    #[arg(long)]
    dump_lp: bool,
    /// Permit possibility decisions over more than three propositions.
    #[arg(long)]
    allow_large_possibility: bool,
}

impl Limits {
    fn options(&self) -> DecideOptions {
        DecideOptions {
            max_props: self.max_props,
            max_clauses: self.max_clauses,
            allow_large_possibility: self.allow_large_possibility,
            oracle: self.oracle,
            dump_lp: self.dump_lp,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SemanticsArg {
    Prob,
    Lowerprob,
    Belief,
    Possibility,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Prob => Semantics::Prob,
            SemanticsArg::Lowerprob => Semantics::LowerProb,
            SemanticsArg::Belief => Semantics::Belief,
            SemanticsArg::Possibility => Semantics::Possibility,
        }
    }
}

/// Language of the input formula, for commands that take either.
#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum ExpLanguage {
    /// Expectation formulas, `E(γ)`.
    #[default]
    E,
    /// Likelihood formulas, `L(φ)`.
    Qu,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Model document.
    #[arg(long)]
    model: PathBuf,
    /// Gamble whose expectation bounds are reported, e.g. `1*p + 2*(p & q)`.
    #[arg(long, conflicts_with_all = ["formula", "file"])]
    gamble: Option<String>,
    /// Formula evaluated in the model (when no gamble is given).
    #[arg(required_unless_present_any = ["gamble", "file"])]
    formula: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    language: ExpLanguage,
    /// Compute belief expectations by every route and compare them.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct SatArgs {
    #[command(flatten)]
    input: FormulaInput,
    #[arg(long, value_enum)]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value_t)]
    language: ExpLanguage,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args, Debug)]
struct FormulaOnlyArgs {
    #[command(flatten)]
    input: FormulaInput,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args, Debug)]
struct FuncSatArgs {
    #[command(flatten)]
    input: FormulaInput,
    /// Read every variable as a single real number instead of a function.
    #[arg(long)]
    as_reals: bool,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Args, Debug)]
struct AssessmentArgs {
    /// Assessment document.
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args, Debug)]
struct ExtendArgs {
    /// Assessment document.
    #[arg(long)]
    file: PathBuf,
    /// Query gamble.
    #[arg(long)]
    gamble: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    /// Distribute coefficients into expectations of formulas.
    T1,
    /// Rewrite every expectation into likelihood-style terms.
    T2,
    /// Read a likelihood formula as an expectation formula.
    Qu,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    #[command(flatten)]
    input: FormulaInput,
    #[arg(long, value_enum)]
    form: Form,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Model document.
    #[arg(long)]
    model: PathBuf,
}

/// A failure, with the exit status it maps to.
#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// The result of a command: the report and whether it signals an input
/// problem (an invalid model document still gets a full report).
struct Outcome {
    report: Value,
    input_error: bool,
}

impl From<Value> for Outcome {
    fn from(report: Value) -> Self {
        Outcome { report, input_error: false }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Sat(a) => commands::sat(a).map(Outcome::from),
        Command::Valid(a) => commands::valid(a).map(Outcome::from),
        Command::GambleSat(a) => commands::gamble_sat(a).map(Outcome::from),
        Command::FuncSat(a) => commands::func_sat(a).map(Outcome::from),
        Command::Coherent(a) => commands::coherent(a).map(Outcome::from),
        Command::Extend(a) => commands::extend(a).map(Outcome::from),
        Command::Translate(a) => commands::translate(a).map(Outcome::from),
        Command::ValidateModel(a) => commands::validate_model(a),
    }
}

/// `key: value` lines; nested values are written as compact JSON.
fn render_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if cli.text {
                println!("{}", render_text(&outcome.report));
            } else {
                println!("{}", serde_json::to_string_pretty(&outcome.report).expect("reports serialize"));
            }
            if outcome.input_error {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
