//! Relation datasets, splits, AP@k ranking evaluation, hyper-parameter
//! tuning and switched-pair generation.

mod dataset;
mod rank;
mod report;
mod split;
mod switched;
mod tune;

use thiserror::Error;

pub use dataset::{
    conflate_multilabel, is_hypernym_label, load_dataset, pos_augment, read_dataset, write_dataset, Dataset,
    LabelMap, RelationPair, DROP_LABEL, HYPERNYM,
};
pub use rank::{average_precision_at_k, rank, ranking_order, Cutoff, RelationFilter, ScoredItem};
pub use report::{evaluate, markdown_table, ApValue, EvaluationReport, RunInfo};
pub use split::{partition_by_pools, split_lexical, split_random, DatasetSplit, LexicalSplit, Pool, TEST_SHARE};
pub use switched::{switched_pairs, SWITCHED};
pub use tune::{default_grid, tune, Trial, TuneOutcome};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("average precision is undefined without positive pairs")]
    UndefinedAp,
    #[error("tuning grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
