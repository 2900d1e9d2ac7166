use std::net::SocketAddr;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hybridauth_core::attack::{FrequencyMode, Reference};
use hybridauth_core::biometric::{FeatureId, Purpose, DEFAULT_RADIUS};

#[derive(Debug, Parser)]
#[command(name = "hybridauth", version, about = "Cognitive + touch-biometric authentication toolkit")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for written artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of text (errors included).
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Security table for parameter rows.
    Params(ParamsArgs),
    /// Simulate users, sessions and imposters against an in-process server.
    Simulate(SimulateArgs),
    /// Run an attack on a transcript.
    Attack(AttackArgs),
    /// Offline template training, verification and feature selection.
    #[command(subcommand)]
    Biometric(BiometricCommand),
    /// Run the HTTP authentication service.
    Serve(ServeArgs),
}

/// `d,k,l,n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub d: u32,
    pub k: usize,
    pub l: usize,
    pub n: usize,
}

impl FromStr for Row {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [d, k, l, n] = parts.as_slice() else {
            return Err(format!("expected d,k,l,n, got {s:?}"));
        };
        let num = |v: &str| v.parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
        Ok(Row { d: num(d)? as u32, k: num(k)?, l: num(l)?, n: num(n)? })
    }
}

pub const TABLE_ROWS: [Row; 4] = [
    Row { d: 5, k: 5, l: 24, n: 60 },
    Row { d: 5, k: 10, l: 30, n: 130 },
    Row { d: 5, k: 14, l: 30, n: 180 },
    Row { d: 5, k: 18, l: 30, n: 225 },
];

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Parameter row `d,k,l,n`; repeatable. Defaults to the four reference rows.
    #[arg(long = "row")]
    pub rows: Vec<Row>,
    /// Assumed biometric false-positive rate.
    #[arg(long = "fpr", default_value_t = 0.05)]
    pub fpr_bar: f64,
    /// Rounds per session for the combined column.
    #[arg(long = "gamma", value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub gammas: Vec<u32>,
    /// Time budget in bits for the CH estimate, one per row; defaults to
    /// each row's meet-in-the-middle cost.
    #[arg(long = "ch-budget", value_delimiter = ',')]
    pub ch_budgets: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolChoice {
    EasyWords,
    ComplexWords,
    Numbered,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value = "5,14,30,180")]
    pub params: Row,
    #[arg(long, default_value_t = 2)]
    pub gamma: u32,
    /// Registration renderings per symbol.
    #[arg(long, default_value_t = 10)]
    pub t: usize,
    #[arg(long, default_value_t = 10)]
    pub users: usize,
    /// Legitimate sessions per user.
    #[arg(long, default_value_t = 5)]
    pub sessions: usize,
    /// Generator noise level; 0 repeats renderings exactly.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// How far each writer departs from the shared glyph shapes.
    #[arg(long, default_value_t = 0.3)]
    pub spread: f64,
    /// Imposter sessions, spread evenly over the users.
    #[arg(long, default_value_t = 0)]
    pub imposter_sessions: usize,
    /// Imposter renderings per symbol and user for the FPR estimate.
    #[arg(long, default_value_t = 200)]
    pub fpr_samples: usize,
    /// Symbol set; `numbered` if d differs from 5.
    #[arg(long, value_enum, default_value = "complex-words")]
    pub symbols: SymbolChoice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AttackName {
    Bruteforce,
    Mitm,
    Ge,
    GeSlack,
    Freq,
    Ch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rifa,
    Rdfa,
}

impl From<ModeArg> for FrequencyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rifa => FrequencyMode::Rifa,
            ModeArg::Rdfa => FrequencyMode::Rdfa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Marginal,
    Uniform,
}

impl From<ReferenceArg> for Reference {
    fn from(r: ReferenceArg) -> Self {
        match r {
            ReferenceArg::Marginal => Reference::Marginal,
            ReferenceArg::Uniform => Reference::Uniform,
        }
    }
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(value_enum)]
    pub name: AttackName,
    /// Transcript JSON; required by every attack except `ch`.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Work cap: candidates, probes or enumerated solutions.
    #[arg(long, default_value_t = hybridauth_core::attack::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Parameters for `ch` when no transcript is given.
    #[arg(long)]
    pub params: Option<Row>,
    /// Time budget in bits for `ch`; defaults to the meet-in-the-middle cost.
    #[arg(long)]
    pub ch_budget: Option<f64>,
    /// Tuple size for frequency analysis.
    #[arg(long, default_value_t = 1)]
    pub delta: usize,
    #[arg(long, value_enum, default_value = "rdfa")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "marginal")]
    pub reference: ReferenceArg,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PurposeArg {
    Sym,
    User,
}

impl From<PurposeArg> for Purpose {
    fn from(p: PurposeArg) -> Self {
        match p {
            PurposeArg::Sym => Purpose::Sym,
            PurposeArg::User => Purpose::User,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum BiometricCommand {
    /// Build a template from rendering files.
    Train {
        #[arg(required = true)]
        traces: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "user")]
        purpose: PurposeArg,
        /// Comma-separated feature names; defaults to all common features.
        #[arg(long, value_delimiter = ',')]
        features: Vec<FeatureId>,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = 3.0)]
        z: f64,
        /// Raise `z` until every training rendering is accepted.
        #[arg(long)]
        fit_z: bool,
    },
    /// Check renderings against a template file.
    Verify {
        #[arg(long)]
        template: PathBuf,
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
    /// TPR/FPR over the z grid for one user and symbol of a corpus.
    Zlist {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        user: String,
        #[arg(long)]
        symbol: String,
        #[arg(long, value_delimiter = ',')]
        features: Vec<FeatureId>,
    },
    /// Greedy feature selection over every user and symbol of a corpus.
    Select {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_delimiter = ',')]
        features: Vec<FeatureId>,
    },
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Directory searched recursively for `.jsonl` rendering files with headers.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Renderings per user and symbol used for registration, in file-name
    /// order; the rest are user tests.
    #[arg(long, default_value_t = 5)]
    pub registration: usize,
    #[arg(long, default_value_t = DEFAULT_RADIUS)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    #[arg(long, default_value = "5,14,30,180")]
    pub params: Row,
    #[arg(long, default_value_t = 2)]
    pub gamma: u32,
    #[arg(long, default_value_t = 10)]
    pub t: usize,
    #[arg(long, value_enum, default_value = "complex-words")]
    pub symbols: SymbolChoice,
    /// JSON array of object image paths; defaults to `emoji/<i>.png`.
    #[arg(long)]
    pub pool: Option<PathBuf>,
    /// Append-only audit log; in memory when absent.
    #[arg(long)]
    pub store: Option<PathBuf>,
    #[arg(long)]
    pub max_consecutive_rejects: Option<u32>,
    #[arg(long)]
    pub max_open_sessions: Option<usize>,
}
