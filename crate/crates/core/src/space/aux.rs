use crate::corpus::{ContextSpec, Vocabulary};
use crate::Scalar;

use super::matrix::CooccurrenceMatrix;
use super::weighted::{Weighting, WeightedSpace};
use super::SpaceError;

/// Context type of the word-word table built alongside every space.
pub const AUX_CONTEXT: ContextSpec = ContextSpec {
    kind: crate::corpus::ContextKind::Window,
    window_size: 5,
    directional: false,
};

/// Word-word PPMI table used for topic coherence. Rows and columns are bare
/// lemma-POS words taken from a win5 indirectional space; unseen pairs have
/// PPMI 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WordPmiTable<F> {
    space: WeightedSpace<F>,
}

impl<F: Scalar> WordPmiTable<F> {
    pub fn from_counts(vocab: Vocabulary, counts: CooccurrenceMatrix) -> Result<Self, SpaceError> {
        let space = WeightedSpace::new(vocab, AUX_CONTEXT, counts, Weighting::Ppmi, false)?;
        Ok(WordPmiTable { space })
    }

    pub fn from_space(space: WeightedSpace<F>) -> Result<Self, SpaceError> {
        if space.weighting() != Weighting::Ppmi || space.context_spec().directional {
            return Err(SpaceError::CorruptSpace(
                "auxiliary table must be an indirectional PPMI window space".into(),
            ));
        }
        Ok(WordPmiTable { space })
    }

    pub fn space(&self) -> &WeightedSpace<F> {
        &self.space
    }

    pub fn into_space(self) -> WeightedSpace<F> {
        self.space
    }

    pub fn pmi(&self, a: &str, b: &str) -> F {
        match (self.space.target_id(a), self.space.contexts().id(b)) {
            (Some(t), Some(c)) => self.space.value(t, c),
            _ => F::zero(),
        }
    }
}
