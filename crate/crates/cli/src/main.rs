use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

mod report;

use dowker::io::Format;

/// Privacy analysis of binary relations through Dowker complexes.
#[derive(Parser)]
#[command(name = "dowker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Input relation format (csv, pairs, json); guessed from the extension
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Highest homology dimension computed (default: all)
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Cap on listed chains and release sequences
    #[arg(long, global = true, default_value_t = 10_000)]
    pub chain_cap: usize,
    /// Cap on search nodes in exact minimisation
    #[arg(long, global = true, default_value_t = dowker::relation::DEFAULT_NODE_CAP)]
    pub node_cap: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Privacy flags, inferences, free faces, Betti numbers and P_R summary
    Analyze { input: PathBuf },
    /// Galois lattice of a relation, or an explicit inference lattice
    Lattice {
        input: PathBuf,
        /// Treat the input as a JSON inference lattice
        #[arg(long)]
        inference: bool,
        /// List maximal chains (up to --chain-cap)
        #[arg(long)]
        chains: bool,
        /// Interpret an observation in Q (inference lattices only)
        #[arg(long = "observe-q")]
        observe_q: Vec<String>,
        /// Interpret an observation in P (inference lattices only)
        #[arg(long = "observe-p")]
        observe_p: Vec<String>,
    },
    /// Release-sequence analysis for an individual, or the longest overall
    Iars {
        input: PathBuf,
        #[arg(long)]
        individual: Option<String>,
        /// Comma-separated attribute order to test for informativeness
        #[arg(long)]
        check: Option<String>,
    },
    /// Reduced Z2 Betti numbers of both Dowker complexes and the chain bound
    Homology { input: PathBuf },
    /// Link survey of uniquely identifiable individuals
    Link {
        input: PathBuf,
        /// Survey a single individual
        #[arg(long, conflicts_with = "all")]
        individual: Option<String>,
        /// Survey every uniquely identifiable individual
        #[arg(long)]
        all: bool,
        /// Write scatter measures (h, i, link size) as CSV
        #[arg(long)]
        scatter: Option<PathBuf>,
    },
    /// Strategy complex analysis of a JSON graph
    Strategy {
        input: PathBuf,
        /// Accept actions with more than one target state
        #[arg(long)]
        allow_stochastic: bool,
        /// Release sequences identifying this strategy id
        #[arg(long)]
        iars: Option<String>,
        /// Goal-delaying release order for this goal state
        #[arg(long)]
        goal_delay: Option<String>,
        /// Comma-separated Hamiltonian cycle of actions (with --iars)
        #[arg(long, requires = "iars")]
        hamiltonian: Option<String>,
    },
    /// Validate a relation morphism and report induced maps
    Morphism {
        domain: PathBuf,
        codomain: PathBuf,
        /// JSON {"fx": {x: x'}, "fy": {y: y'}}
        #[arg(long)]
        map: PathBuf,
    },
    /// Encode multivalent records (CSV with header) as a binary relation
    Encode {
        input: PathBuf,
        /// Comma-separated fields (default: all columns)
        #[arg(long)]
        fields: Option<String>,
        /// Output format: json report, csv or pairs
        #[arg(long, default_value = "json")]
        to: String,
    },
    /// Embeddings of one attribute complex into another
    Embed {
        pattern: PathBuf,
        host: PathBuf,
        /// Use association complexes instead
        #[arg(long)]
        association: bool,
        /// Search node bound
        #[arg(long, default_value_t = 1 << 20)]
        bound: u64,
    },
}

pub type CliResult<T> = Result<T, String>;

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load_relation(path: &Path, common: &Common) -> CliResult<(dowker::Relation, Format)> {
    let format = match &common.format {
        Some(f) => f.parse::<Format>().map_err(|e| e.to_string())?,
        None => Format::from_path(&path.to_string_lossy()).unwrap_or(Format::CsvMatrix),
    };
    let text = read(path)?;
    let parsed = dowker::io::parse_relation(&text, format).map_err(|e| format!("{}: {e}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok((parsed.relation, format))
}

fn emit(text: &str, common: &Common) -> CliResult<()> {
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

enum Failure {
    /// Bad flag combination; exit status 2 like clap's own errors.
    Usage(String),
    Data(String),
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Data(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let c = &cli.common;
    let out = match cli.command {
        Command::Analyze { input } => json_text(&report::analyze(&input, c)?),
        Command::Lattice { input, inference, chains, observe_q, observe_p } => {
            if inference {
                json_text(&report::inference_lattice(&input, &observe_q, &observe_p)?)
            } else {
                if !observe_q.is_empty() || !observe_p.is_empty() {
                    return Err(Failure::Usage("--observe-q/--observe-p need --inference".into()));
                }
                json_text(&report::lattice(&input, chains, c)?)
            }
        }
        Command::Iars { input, individual, check } => json_text(&report::iars(&input, individual.as_deref(), check.as_deref(), c)?),
        Command::Homology { input } => json_text(&report::homology(&input, c)?),
        Command::Link { input, individual, all, scatter } => {
            if individual.is_none() && !all {
                return Err(Failure::Usage("link needs --individual or --all".into()));
            }
            json_text(&report::link(&input, individual.as_deref(), scatter.as_ref(), c)?)
        }
        Command::Strategy { input, allow_stochastic, iars, goal_delay, hamiltonian } => json_text(&report::strategy(
            &input,
            allow_stochastic,
            iars.as_deref(),
            goal_delay.as_deref(),
            hamiltonian.as_deref(),
            c,
        )?),
        Command::Morphism { domain, codomain, map } => json_text(&report::morphism(&domain, &codomain, &map, c)?),
        Command::Encode { input, fields, to } => report::encode(&input, fields.as_deref(), &to)?,
        Command::Embed { pattern, host, association, bound } => json_text(&report::embed(&pattern, &host, association, bound, c)?),
    };
    Ok(emit(&out, c)?)
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
