use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twk_core::checks::{run_all, CheckOptions, Status};
use twk_core::regular::find_difference;
use twk_core::{
    bounded_language, build, convert_bounded_k, crossing_sequence_nfa, determinize, lambda_of_machine,
    lambda_of_word, minimize, parse_machine, run, run_nondet, serialize_machine, shepherdson, compute_spectrum,
    EnumerationBudget, Family, Machine, Word,
};

#[derive(Parser)]
#[command(name = "twk", version, about = "Two-way finite automata with counted left moves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WordInput {
    /// The word as concatenated single-character symbols.
    word: Option<String>,
    /// Read whitespace-separated symbol tokens from a file instead.
    #[arg(long, conflicts_with = "word")]
    word_file: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Write the resulting machine here instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    BoundedK,
    Shepherdson,
    Crossing,
    Subset,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a machine on a word.
    Run {
        machine: PathBuf,
        #[command(flatten)]
        input: WordInput,
        /// Print every configuration.
        #[arg(long)]
        trace: bool,
    },
    /// Left moves made on one word.
    LambdaWord {
        machine: PathBuf,
        #[command(flatten)]
        input: WordInput,
    },
    /// Maximum left moves over all accepted words.
    LambdaMachine { machine: PathBuf },
    /// Convert to a one-way machine.
    Convert {
        machine: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Lookback bound for bounded-k.
        #[arg(short = 'k')]
        k: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Minimal DFA of the machine's language.
    Minimize {
        machine: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Language equivalence of two machines.
    Equiv { left: PathBuf, right: PathBuf },
    /// Minimal DFA of the words accepted with at most k left moves.
    BoundedLang {
        machine: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest 2DFAs per left-move budget.
    Spectrum {
        machine: PathBuf,
        #[arg(long)]
        max_states: Option<usize>,
        #[arg(long)]
        max_candidates: Option<u64>,
        #[arg(long)]
        max_seconds: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Build a member of a named family.
    Family {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Recompute the published state counts and spectra.
    CheckPaper {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Budget for the one spectrum that may need it.
        #[arg(long)]
        max_seconds: Option<f64>,
    },
}

type CliResult = Result<(), String>;

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<Machine, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_machine(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_word(machine: &Machine, input: &WordInput) -> Result<Word, String> {
    let word = match (&input.word, &input.word_file) {
        (_, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            machine.alphabet().parse_tokens(&text)
        }
        (Some(w), None) => machine.alphabet().parse_chars(w),
        (None, None) => machine.alphabet().parse_chars(""),
    };
    word.map_err(|e| e.to_string())
}

fn emit(machine: &Machine, output: &Output) -> CliResult {
    let text = serialize_machine(machine);
    match &output.output {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Any machine as a DFA over the same alphabet.
fn to_dfa(machine: &Machine) -> twk_core::Result<Machine> {
    match (machine.is_deterministic(), machine.is_one_way()) {
        (true, true) => Ok(machine.clone()),
        (true, false) => shepherdson(machine),
        (false, true) => determinize(machine),
        (false, false) => determinize(&crossing_sequence_nfa(machine)?),
    }
}

fn budget_seconds(flag: Option<f64>, default: f64) -> Result<f64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("TWK_BUDGET_SECONDS") {
        Ok(v) => v
            .parse()
            .map_err(|_| format!("TWK_BUDGET_SECONDS: not a number: {v:?}")),
        Err(_) => Ok(default),
    }
}

fn execute(command: Command) -> CliResult {
    let domain = |e: twk_core::Error| e.to_string();
    match command {
        Command::Run { machine, input, trace } => {
            let m = load(&machine)?;
            let w = read_word(&m, &input)?;
            if m.is_deterministic() {
                let out = run(&m, &w, trace).map_err(domain)?;
                println!(
                    "{} left_moves={} steps={}",
                    out.verdict.as_str(),
                    out.left_moves,
                    out.steps
                );
                for c in out.trace.iter().flatten() {
                    println!("q{} {}", c.state, c.position);
                }
            } else {
                let out = run_nondet(&m, &w).map_err(domain)?;
                match out.min_left_moves {
                    Some(l) => println!("accepted min_left_moves={l}"),
                    None => println!("rejected"),
                }
            }
        }
        Command::LambdaWord { machine, input } => {
            let m = load(&machine)?;
            let w = read_word(&m, &input)?;
            match lambda_of_word(&m, &w).map_err(domain)? {
                Some(l) => println!("left_moves={l}"),
                None => println!("rejected"),
            }
        }
        Command::LambdaMachine { machine } => {
            println!("{}", lambda_of_machine(&load(&machine)?).map_err(domain)?);
        }
        Command::Convert { machine, method, k, output } => {
            let m = load(&machine)?;
            let converted = match method {
                Method::BoundedK => {
                    let k = k.ok_or("bounded-k needs -k")?;
                    convert_bounded_k(&m, k).map_err(domain)?.dfa
                }
                Method::Shepherdson => shepherdson(&m).map_err(domain)?,
                Method::Crossing => crossing_sequence_nfa(&m).map_err(domain)?,
                Method::Subset => determinize(&m).map_err(domain)?,
            };
            log::info!("{} states", converted.state_count());
            emit(&converted, &output)?;
        }
        Command::Minimize { machine, output } => {
            let m = load(&machine)?;
            let min = minimize(&to_dfa(&m).map_err(domain)?).map_err(domain)?;
            emit(&min, &output)?;
        }
        Command::Equiv { left, right } => {
            let a = to_dfa(&load(&left)?).map_err(domain)?;
            let b = to_dfa(&load(&right)?).map_err(domain)?;
            match find_difference(&a, &b).map_err(domain)? {
                None => println!("equivalent"),
                Some(w) => println!("different witness={:?}", a.alphabet().render(&w)),
            }
        }
        Command::BoundedLang { machine, k, output } => {
            let t = bounded_language(&load(&machine)?, k).map_err(domain)?;
            emit(&t.dfa, &output)?;
        }
        Command::Spectrum {
            machine,
            max_states,
            max_candidates,
            max_seconds,
            json,
        } => {
            let defaults = EnumerationBudget::default();
            let budget = EnumerationBudget {
                max_states: max_states.unwrap_or(defaults.max_states),
                max_candidates: max_candidates.unwrap_or(defaults.max_candidates),
                max_seconds: budget_seconds(max_seconds, defaults.max_seconds)?,
            };
            let result = compute_spectrum(&load(&machine)?, &budget).map_err(domain)?;
            if json {
                println!("{}", result.to_json());
            } else {
                println!("{result}");
            }
        }
        Command::Family { name, n, k, m, i, output } => {
            let family = Family::from_name(&name, n, k, m, i).map_err(domain)?;
            emit(&build(&family).map_err(domain)?, &output)?;
        }
        Command::CheckPaper { samples, seed, max_seconds } => {
            let mut options = CheckOptions {
                samples,
                seed,
                ..Default::default()
            };
            options.spectrum_budget.max_seconds = budget_seconds(max_seconds, options.spectrum_budget.max_seconds)?;
            let reports = run_all(&options).map_err(domain)?;
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
            if failed > 0 {
                return Err(format!("{failed} of {} checks failed", reports.len()));
            }
        }
    }
    Ok(())
}
