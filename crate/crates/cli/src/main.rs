//! `biq`: batch front end for biq-core.
//!
//! Exit status is 0 on success, 1 when a checked property fails and 2 on
//! input or usage errors.

mod fuzz;

use std::error::Error;
use std::fs;
use std::process::ExitCode;

use biq_core::asim::{bounded_game_relation, check_bi_asimulation, format_relation, parse_relation, scan_enumerated};
use biq_core::counterexample::run_suite;
use biq_core::kripke::{forces_with, load_model, mtoy, ClauseMode, FiniteModel, PointedModel};
use biq_core::syntax::parse_formula;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "biq", version, about = "Bi-intuitionistic Kripke models, bi-asimulations and the quasi-partition counterexample")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Clauses {
    Standard,
    Literal,
}

impl From<Clauses> for ClauseMode {
    fn from(c: Clauses) -> Self {
        match c {
            Clauses::Standard => ClauseMode::Standard,
            Clauses::Literal => ClauseMode::Literal,
        }
    }
}

#[derive(Args)]
struct PairArgs {
    /// Left model: a JSON file or `mtoy`.
    #[arg(long)]
    left: String,
    /// Right model: a JSON file or `mtoy`.
    #[arg(long)]
    right: String,
    #[arg(long)]
    left_world: Option<String>,
    #[arg(long)]
    right_world: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Load a model file and report closure and monotonicity problems.
    Validate {
        #[arg(long)]
        model: String,
    },
    /// Evaluate a sentence at one world, or at every world.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        world: Option<String>,
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum, default_value = "standard")]
        clauses: Clauses,
    },
    /// Compute the bounded game relation and check it, or check a dumped
    /// relation with `--check`.
    Asim {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        /// Relation dump to verify instead of computing one.
        #[arg(long)]
        check: Option<String>,
    },
    /// Count the enumerated shared-signature sentences separating two
    /// pointed models.
    Scan {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 7)]
        max_size: usize,
        #[arg(long, default_value_t = 2)]
        max_vars: usize,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        /// How many representative separators to print.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Run the quasi-partition suite.
    Counterexample {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Differential and persistence fuzzing on random finite models.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        #[arg(long, value_enum, default_value = "standard")]
        clauses: Clauses,
    },
}

type CliResult = Result<bool, Box<dyn Error>>;

fn load(spec: &str) -> Result<FiniteModel, Box<dyn Error>> {
    if spec == "mtoy" {
        return Ok(mtoy());
    }
    let text = fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
    Ok(load_model(&text).map_err(|e| format!("{spec}: {e}"))?)
}

fn world(m: &FiniteModel, name: &str) -> Result<usize, Box<dyn Error>> {
    m.world_index(name).ok_or_else(|| format!("unknown world `{name}`").into())
}

fn validate(model: &str) -> CliResult {
    let m = load(model)?;
    println!("valid: {} worlds, {} elements, signature {}", m.world_count(), m.domain_size(), m.signature());
    Ok(true)
}

fn eval(model: &str, world_name: Option<&str>, formula: &str, clauses: Clauses) -> CliResult {
    let m = load(model)?;
    let f = parse_formula(formula, &m.expanded_signature())?;
    let worlds: Vec<usize> = match world_name {
        Some(w) => vec![world(&m, w)?],
        None => (0..m.world_count()).collect(),
    };
    for w in worlds {
        let value = forces_with(&PointedModel::new(&m, w)?, &f, clauses.into())?;
        if world_name.is_some() {
            println!("{value}");
        } else {
            println!("{} {value}", m.world_name(w));
        }
    }
    Ok(true)
}

fn asim(pair: &PairArgs, rounds: usize, max_len: usize, check: Option<&str>) -> CliResult {
    let (m0, m1) = (load(&pair.left)?, load(&pair.right)?);
    let rel = match check {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            parse_relation(&text, &m0, &m1).map_err(|e| format!("{path}: {e}"))?
        }
        None => {
            let rel = bounded_game_relation(&m0, &m1, rounds, max_len)?;
            print!("{}", format_relation(&m0, &m1, &rel));
            rel
        }
    };
    let report = check_bi_asimulation(&m0, &m1, &rel)?;
    for line in report.to_string().lines() {
        println!("# {line}");
    }
    if let (Some(l), Some(r)) = (&pair.left_world, &pair.right_world) {
        let grade = rel.root_grade(0, world(&m0, l)?, world(&m1, r)?);
        match grade {
            Some(g) => println!("# root {l} ~ {r} @{g}"),
            None => println!("# root {l} ~ {r} unrelated"),
        }
    }
    Ok(report.is_ok())
}

fn scan(pair: &PairArgs, max_size: usize, max_vars: usize, rank: usize, show: usize) -> CliResult {
    let (m0, m1) = (load(&pair.left)?, load(&pair.right)?);
    let (Some(l), Some(r)) = (&pair.left_world, &pair.right_world) else {
        return Err("scan needs --left-world and --right-world".into());
    };
    let pm0 = PointedModel::new(&m0, world(&m0, l)?)?;
    let pm1 = PointedModel::new(&m1, world(&m1, r)?)?;
    let shared = m0.signature().intersection(m1.signature());
    let summary = scan_enumerated(&pm0, &pm1, &shared, max_size, max_vars, rank)?;
    println!("sentences={} separators={} classes={}", summary.total, summary.separators, summary.representatives.len());
    for f in summary.representatives.iter().take(show) {
        println!("separator {f}");
    }
    Ok(true)
}

fn counterexample(samples: usize, seed: u64) -> CliResult {
    if samples == 0 {
        return Err("--samples must be positive".into());
    }
    let report = run_suite(samples, seed);
    print!("{report}");
    Ok(report.is_ok())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Validate { model } => validate(&model),
        Command::Eval { model, world, formula, clauses } => eval(&model, world.as_deref(), &formula, clauses),
        Command::Asim { pair, rounds, max_len, check } => asim(&pair, rounds, max_len, check.as_deref()),
        Command::Scan { pair, max_size, max_vars, rank, show } => scan(&pair, max_size, max_vars, rank, show),
        Command::Counterexample { samples, seed } => counterexample(samples, seed),
        Command::Fuzz { cases, seed, max_size, clauses } => {
            let report = fuzz::campaign(cases, seed, max_size, clauses.into());
            print!("{report}");
            Ok(report.is_ok())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
