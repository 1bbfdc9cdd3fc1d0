//! Sparse co-occurrence matrices, feature weighting and space files.

mod aux;
mod io;
mod matrix;
mod weighted;

pub use aux::{WordPmiTable, AUX_CONTEXT};
pub use io::{decode, encode, load_space, save_space, FORMAT_VERSION, MAGIC};
pub use matrix::{accumulate, ContextIndex, CooccurrenceMatrix, CountAccumulator};
pub use weighted::{ppmi, RankedContexts, SortWeighting, WeightedSpace, Weighting};

#[derive(Debug, thiserror::Error)]
pub enum SpaceError {
    #[error("cannot weight an empty matrix")]
    DegenerateSpace,
    #[error("context {0} has no counts")]
    UnknownContext(u32),
    #[error("target {0} has no contexts")]
    EmptyRow(u32),
    #[error("matrix has {rows} rows but the vocabulary has {vocab} entries")]
    Shape { rows: usize, vocab: usize },
    #[error("corrupt space file: {0}")]
    CorruptSpace(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
