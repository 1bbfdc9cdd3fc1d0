//! Unsupervised hypernymy measures. Every score reads as "to what extent is
//! `y` a hypernym of `x`" over the weighted rows of a space.

mod config;
mod scorer;

pub use config::{Aggregate, ApIncNorm, Measure, MeasureConfig};
pub use scorer::Scorer;

use crate::space::SpaceError;

#[derive(Debug, thiserror::Error)]
pub enum MeasureError {
    #[error("`{0}` is not in the vocabulary")]
    Oov(String),
    #[error("`{0}` has no contexts")]
    EmptyRow(String),
    #[error("hypernym candidate has zero entropy")]
    DegenerateEntropy,
    #[error("RCTC needs the auxiliary word-word PMI table")]
    MissingAuxiliary,
    #[error("invalid measure configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl MeasureError {
    /// Short machine-readable reason written to score files.
    pub fn reason(&self) -> &'static str {
        match self {
            MeasureError::Oov(_) => "oov",
            MeasureError::EmptyRow(_) => "empty_row",
            MeasureError::DegenerateEntropy => "degenerate_entropy",
            MeasureError::MissingAuxiliary => "missing_auxiliary",
            MeasureError::InvalidConfig(_) => "invalid_config",
            MeasureError::Space(SpaceError::EmptyRow(_)) => "empty_row",
            MeasureError::Space(_) => "space_error",
        }
    }
}

/// A scored `(x, y)` pair. `score` is `None` when the measure is undefined
/// for the pair, with `reason` saying why.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredPair<F> {
    pub x: String,
    pub y: String,
    pub score: Option<F>,
    pub reason: Option<&'static str>,
}

impl<F> ScoredPair<F> {
    pub fn from_result(x: &str, y: &str, res: Result<F, MeasureError>) -> Self {
        match res {
            Ok(s) => ScoredPair { x: x.into(), y: y.into(), score: Some(s), reason: None },
            Err(e) => ScoredPair { x: x.into(), y: y.into(), score: None, reason: Some(e.reason()) },
        }
    }

    pub fn defined(&self) -> bool {
        self.score.is_some()
    }
}
