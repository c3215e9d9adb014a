use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{load_config, ExperimentConfig};
use crate::CliError;

const OVERRIDE_NOTE: &str = "Options given on the command line override the same fields of a --config file. \
Real numbers are decimal strings such as 0.1, 1e-3 or 3/7 and are kept exact where the command allows.";

#[derive(Debug, Parser)]
#[command(name = "polya-net", version, about = "Simulate, enumerate and approximate Polya contagion on networks")]
#[command(after_help = OVERRIDE_NOTE)]
pub struct Cli {
    /// Worker threads for Monte Carlo runs (default: all cores).
    #[arg(long, global = true, env = "POLYA_NET_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated network as an edge list.
    GraphGen(GraphGenArgs),
    /// Monte Carlo trajectories of the infection and susceptibility rates.
    Simulate(SimulateArgs),
    /// Exact joint law of every draw up to the horizon.
    Enumerate(EnumerateArgs),
    /// Classical Polya approximations of individual nodes.
    Fit(FitArgs),
    /// Discrete-time SIS comparison run.
    Sis(SisArgs),
    /// Regenerate the data behind one of the reference figures.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Complete,
    Cycle,
    Star,
    Ba,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Complete => "complete",
            Kind::Cycle => "cycle",
            Kind::Star => "star",
            Kind::Ba => "ba",
        }
    }
}

#[derive(Debug, Args)]
#[command(after_help = OVERRIDE_NOTE)]
pub struct GraphGenArgs {
    /// JSON configuration; its `network` field describes the graph.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Links per new node for `ba` (default 2).
    #[arg(long)]
    pub m: Option<usize>,
    /// Graph seed for `ba` (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Destination file (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl GraphGenArgs {
    pub fn resolve(&self) -> Result<crate::GraphSpec, CliError> {
        let base = match &self.config {
            Some(p) => load_config(p)?.network,
            None => None,
        };
        let kind = self
            .kind
            .map(|k| k.name().to_string())
            .or_else(|| base.as_ref().map(|b| b.kind.clone()))
            .ok_or_else(|| CliError::Usage("missing --kind".into()))?;
        let nodes = self
            .nodes
            .or_else(|| base.as_ref().map(|b| b.nodes))
            .ok_or_else(|| CliError::Usage("missing --nodes".into()))?;
        Ok(crate::GraphSpec {
            kind,
            nodes,
            m: self.m.or_else(|| base.as_ref().and_then(|b| b.m)),
            seed: self.seed.or_else(|| base.as_ref().and_then(|b| b.seed)),
        })
    }
}

/// Network, masses and reinforcement shared by the urn commands.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Edge list: node count on the first line, then one `i j` pair per line.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Initial red masses, comma separated; one value applies to every node.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub red: Option<Vec<String>>,
    /// Initial black masses, comma separated; one value applies to every node.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub black: Option<Vec<String>>,
    /// Reinforcement for both colours.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Reinforcement after a red draw (overrides --delta).
    #[arg(long, allow_hyphen_values = true)]
    pub delta_red: Option<String>,
    /// Reinforcement after a black draw (overrides --delta).
    #[arg(long, allow_hyphen_values = true)]
    pub delta_black: Option<String>,
    /// Finite memory window; omit for infinite memory.
    #[arg(long)]
    pub memory: Option<usize>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Master seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ModelArgs {
    fn flags(&self) -> ExperimentConfig {
        ExperimentConfig {
            graph: self.graph.clone(),
            red: self.red.clone(),
            black: self.black.clone(),
            delta: self.delta.clone(),
            delta_red: self.delta_red.clone(),
            delta_black: self.delta_black.clone(),
            memory: self.memory,
            horizon: self.horizon,
            seed: self.seed,
            ..Default::default()
        }
    }

    /// The config file, if any, with `extra` and then these flags laid over it.
    pub fn resolve(&self, extra: ExperimentConfig) -> Result<ExperimentConfig, CliError> {
        let base = match &self.config {
            Some(p) => load_config(p)?,
            None => ExperimentConfig::default(),
        };
        let mut flags = self.flags();
        flags = extra.overlay(&flags);
        let mut merged = base.overlay(&flags);
        if self.graph.is_some() {
            merged.network = None;
        }
        Ok(merged)
    }
}

#[derive(Debug, Args)]
#[command(after_help = OVERRIDE_NOTE)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Trajectory CSV (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Add the node-averaged consecutive-infection frequency column.
    #[arg(long)]
    pub pairs: bool,
    /// Node whose sample averages are histogrammed into --histogram-output.
    #[arg(long)]
    pub node: Option<usize>,
    #[arg(long, requires = "node")]
    pub histogram_output: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
}

#[derive(Debug, Args)]
#[command(after_help = OVERRIDE_NOTE)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Refuse tables with more than 2^cap entries (default 24).
    #[arg(long)]
    pub cap: Option<usize>,
    /// Print probabilities as floats instead of exact fractions.
    #[arg(long)]
    pub float: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(after_help = OVERRIDE_NOTE)]
pub struct FitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Node to fit (default: every node).
    #[arg(long)]
    pub node: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(after_help = OVERRIDE_NOTE)]
pub struct SisArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Infection probability per infected neighbour and step.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Cure probability per step.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_sis: Option<String>,
    /// Initial infection probabilities, comma separated; one value applies
    /// to every node. Without them the urn proportions of --red/--black are
    /// used, or 1/2 if no masses are given.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub init_probs: Option<Vec<String>>,
    /// Per-step probabilities as CSV.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig2,
    Fig4,
    Fig5,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Master seed (default 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the trial count (fig2 50000, fig4 5000, fig5 500).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Override the horizon (1000 for every figure).
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Histogram bins for fig4.
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
}
