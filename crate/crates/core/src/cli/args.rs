use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::corpus::ContextSpec;
use crate::eval::{Cutoff, RelationFilter};
use crate::measures::{Aggregate, ApIncNorm, Measure};
use crate::space::{SortWeighting, Weighting};

#[derive(Debug, Parser)]
#[command(name = "hypernym", version, about = "Distributional spaces and unsupervised hypernymy measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a weighted space from a CoNLL corpus.
    BuildSpace(BuildArgs),
    /// Score the pairs of a dataset with one or more measures.
    Score(ScoreArgs),
    /// Rank scored pairs and report AP@k.
    Evaluate(EvaluateArgs),
    /// Pick measure hyper-parameters by AP@100 on a validation split.
    Tune(TuneArgs),
    /// Append switched hypernym pairs to a dataset.
    SwitchPairs(SwitchArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// win2, win2d, win5, win5d, dep or joint [default: dep]
    #[arg(long)]
    pub context: Option<ContextSpec>,
    /// freq, ppmi or plmi [default: ppmi]
    #[arg(long)]
    pub weighting: Option<Weighting>,
    /// Minimum lemma-POS frequency [default: 1]
    #[arg(long)]
    pub min_freq: Option<u64>,
    /// Normalise context entropies by log2 of their support size.
    #[arg(long)]
    pub normalize_entropy: bool,
    /// Also write the win5 word-word PPMI table RCTC needs.
    #[arg(long)]
    pub aux: Option<PathBuf>,
    /// Also write a `target TAB context TAB value` text dump.
    #[arg(long)]
    pub text: Option<PathBuf>,
    /// TOML file with defaults for the options above, a column map and a
    /// POS map.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct DatasetArgs {
    /// TSV with `x TAB y TAB relation` rows.
    #[arg(long)]
    pub dataset: PathBuf,
    /// `label TAB canonical` rewrites; canonical `-` drops the pair.
    #[arg(long)]
    pub label_map: Option<PathBuf>,
    /// Expand bare words into `word-n`, `word-a`, `word-v` pairs found in the
    /// space.
    #[arg(long)]
    pub pos_augment: bool,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub space: PathBuf,
    /// Word-word PPMI table written by `build-space --aux` (RCTC only).
    #[arg(long)]
    pub aux: Option<PathBuf>,
    #[command(flatten)]
    pub data: DatasetArgs,
    /// Comma-separated measure names, or `all`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub measure: Vec<String>,
    #[arg(long = "N", default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value = "median")]
    pub aggregate: Aggregate,
    #[arg(long, default_value = "ppmi")]
    pub sort_weighting: SortWeighting,
    /// Normalise APinc by the hypernym's contexts (default) or the hyponym's.
    #[arg(long, value_parser = ["hypernym", "hyponym"], default_value = "hypernym")]
    pub ap_inc_norm: String,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

impl ScoreArgs {
    pub fn measures(&self) -> Result<Vec<Measure>, String> {
        let mut out = Vec::new();
        for m in &self.measure {
            if m == "all" {
                out.extend(Measure::ALL);
            } else {
                out.push(m.parse()?);
            }
        }
        Ok(out)
    }

    pub fn ap_inc_norm(&self) -> ApIncNorm {
        if self.ap_inc_norm == "hyponym" {
            ApIncNorm::Hyponym
        } else {
            ApIncNorm::Hypernym
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Score TSV written by `score`.
    #[arg(long)]
    pub scores: PathBuf,
    /// Take gold labels from this dataset instead of the score file.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// `all`, a single relation, or `each` for `all` plus every relation in
    /// turn. Repeatable.
    #[arg(long, default_value = "all")]
    pub relation: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values = ["100", "all"])]
    pub k: Vec<Cutoff>,
    /// Name recorded in the report [default: dataset file stem].
    #[arg(long)]
    pub name: Option<String>,
    /// JSON-lines report; the Markdown table goes next to it as `.md`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long)]
    pub aux: Option<PathBuf>,
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(long)]
    pub measure: Measure,
    #[arg(long, default_value = "all")]
    pub relation: RelationFilter,
    /// Seed of the 90/10 split whose validation part is tuned on.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the N values of the default grid.
    #[arg(long = "N", value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Restrict the aggregate dimension of the grid.
    #[arg(long)]
    pub aggregate: Option<Aggregate>,
    /// Restrict the sort-weighting dimension of the grid.
    #[arg(long)]
    pub sort_weighting: Option<SortWeighting>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SwitchArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}
