use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "outsplit",
    version,
    about = "Degree-constrained bipartitions and bisections of digraphs"
)]
pub struct Cli {
    /// Worker threads for the parallel library calls (default: all cores).
    #[arg(long, global = true, env = "OUTSPLIT_JOBS")]
    pub jobs: Option<usize>,

    /// Log more (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded instance as an edge list.
    Generate(GenerateArgs),
    /// Split a digraph and print the split JSON.
    Split(SplitArgs),
    /// Exact bad-vertex probabilities for a pair profile or a vertex.
    Prob(ProbArgs),
    /// Recheck a split, the local lemma conditions, or minimality.
    Verify(VerifyArgs),
    /// Print an analytic bound.
    Bound(BoundArgs),
    /// Run a Monte Carlo grid and write CSV.
    Sweep(SweepArgs),
    /// Exhaustive enumeration on small instances.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Rotational,
    Tournament,
    Multipartite,
    MinOutdegree,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: GenFamily,
    /// Vertex count (all families but multipartite).
    #[arg(long)]
    pub n: Option<usize>,
    /// Part sizes for multipartite, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub parts: Vec<usize>,
    /// Out-degree for min-outdegree.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Disjoint union of this many instances; copy i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    /// Relabel the vertices by a seeded permutation.
    #[arg(long)]
    pub shuffle: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Random pairing bisection with retries (needs --eps).
    Pairing,
    /// Moser–Tardos resampling on one pairing (needs --eps).
    Lll,
    /// Minimal-core peeling (needs --s and --t).
    Peel,
    /// Pairing bisection shrunk to a strong minimal core (needs --eps).
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Gate {
    Warn,
    Enforce,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Edge-list file, or - for standard input.
    #[arg(long = "in")]
    pub input: String,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = outsplit_core::pairing::DEFAULT_MAX_TRIALS)]
    pub max_trials: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_resamples: usize,
    /// What peel does when a multipartite input misses the degree hypothesis.
    #[arg(long, value_enum, default_value_t = Gate::Warn)]
    pub gate: Gate,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["profile", "vertex", "expected"])))]
#[command(group(ArgGroup::new("thresh").required(true).args(["eps", "t"])))]
pub struct ProbArgs {
    /// Pair profile `a,b,rel` with rel one of plus, minus, singleton.
    #[arg(long)]
    pub profile: Option<String>,
    /// Profile of this vertex under --pairing / --pairing-seed.
    #[arg(long)]
    pub vertex: Option<usize>,
    /// Exact and analytic expected bad count under the pairing.
    #[arg(long)]
    pub expected: bool,
    #[arg(long = "in")]
    pub input: Option<String>,
    /// Pairing file, one block per line.
    #[arg(long)]
    pub pairing: Option<PathBuf>,
    /// Draw the pairing with this seed instead of reading a file.
    #[arg(long)]
    pub pairing_seed: Option<u64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Absolute threshold.
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(true).args(["split", "lll", "minimal"])))]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: String,
    /// Split JSON to recheck.
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Check the weighted local lemma conditions (needs --eps).
    #[arg(long, conflicts_with = "split")]
    pub lll: bool,
    /// Check s-minimality of the digraph, or with --split that side A is a
    /// minimal core (needs --s).
    #[arg(long, conflicts_with = "lll")]
    pub minimal: bool,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").required(true).args(["delta0", "delta0_lll", "core_bound", "max_indegree"])))]
pub struct BoundArgs {
    /// δ₀ of the pairing method at this ε.
    #[arg(long, value_name = "EPS")]
    pub delta0: Option<f64>,
    /// δ₀ of the local lemma method at this ε.
    #[arg(long, value_name = "EPS")]
    pub delta0_lll: Option<f64>,
    /// Order bound for s-minimal k-partite tournaments.
    #[arg(long, num_args = 2, value_names = ["S", "K"])]
    pub core_bound: Option<Vec<usize>>,
    /// Admissible maximum in-degree e^{ε²(δ−1)}/(8δ).
    #[arg(long, num_args = 2, value_names = ["EPS", "DELTA"])]
    pub max_indegree: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    /// Mean bad count against the exact and analytic expectations.
    Expected,
    /// Success rate of the retrying sampler.
    Success,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// rotational or tournament.
    #[arg(long)]
    pub family: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SweepMode::Expected)]
    pub mode: SweepMode,
    /// Samples each success-mode trial may draw.
    #[arg(long, default_value_t = 1)]
    pub attempts: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("query").required(true).args(["exists_split", "xv_dist", "scan_minimal"])))]
pub struct OracleArgs {
    /// Search all bipartitions for one with δ⁺(A) >= s and δ⁺(B) >= t.
    #[arg(long)]
    pub exists_split: bool,
    /// Exact law of X_v for --vertex under a pairing.
    #[arg(long)]
    pub xv_dist: bool,
    /// List s-minimal orientations of K_{p,q}, p <= q <= --max-part.
    #[arg(long)]
    pub scan_minimal: bool,
    #[arg(long = "in")]
    pub input: Option<String>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Restrict --exists-split to bisections.
    #[arg(long)]
    pub bisection: bool,
    #[arg(long)]
    pub vertex: Option<usize>,
    #[arg(long)]
    pub pairing: Option<PathBuf>,
    #[arg(long)]
    pub pairing_seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub max_part: usize,
}
