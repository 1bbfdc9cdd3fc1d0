//! Corpus ingestion: CoNLL parsing, vocabulary construction and context
//! extraction.

mod conll;
mod context;
mod token;
mod vocab;

pub use conll::{parse_conll, ColumnMap, ConllFormat, ConllReader, PosMap};
pub use context::{
    context_words, extract_contexts, extract_dep_contexts, extract_joint_contexts,
    extract_window_contexts, for_each_context, ContextKind, ContextSpec, CoocEvent,
    ParseContextError, INVERSE_MARK,
};
pub use token::{lemma_pos_key, Pos, Sentence, SentenceDefect, Token};
pub use vocab::{build_vocabulary, VocabCounter, Vocabulary};
