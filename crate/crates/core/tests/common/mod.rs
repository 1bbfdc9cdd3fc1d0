//! Synthetic corpora and datasets shared by the integration tests.
#![allow(dead_code)]

use std::fmt::Write as _;

use hypernym::eval::RelationPair;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GROUPS: usize = 10;
pub const HYPONYMS: usize = 10;
const PRIVATE: usize = 1;
const POOL: usize = 4;
const GENERAL: usize = 20;
const FILLERS: usize = 20;

pub fn hypernym_word(i: usize) -> String {
    format!("hyper{i}")
}

pub fn hyponym_word(i: usize, j: usize) -> String {
    format!("hypo{i}x{j}")
}

fn private_verb(i: usize, j: usize, k: usize) -> String {
    format!("priv{i}x{j}x{k}")
}

fn pool_verb(i: usize, k: usize) -> String {
    format!("pool{i}x{k}")
}

fn general_verb(k: usize) -> String {
    format!("gen{k}")
}

/// One noun type of the planted corpus with its context distribution.
struct Noun {
    lemma: String,
    sentences: usize,
    contexts: Vec<(String, f64)>,
}

fn nouns() -> Vec<Noun> {
    let mut out = Vec::new();
    for i in 0..GROUPS {
        for j in 0..HYPONYMS {
            let mut contexts = Vec::new();
            for k in 0..PRIVATE {
                contexts.push((private_verb(i, j, k), 0.5 / PRIVATE as f64));
            }
            for k in 0..POOL {
                contexts.push((pool_verb(i, k), 0.4 / POOL as f64));
            }
            for k in 0..GENERAL {
                contexts.push((general_verb(k), 0.1 / GENERAL as f64));
            }
            out.push(Noun { lemma: hyponym_word(i, j), sentences: 250, contexts });
        }
    }
    for i in 0..GROUPS {
        let mut contexts = Vec::new();
        for k in 0..GENERAL {
            contexts.push((general_verb(k), 0.6 / GENERAL as f64));
        }
        for k in 0..POOL {
            contexts.push((pool_verb(i, k), 0.25 / POOL as f64));
        }
        for j in 0..HYPONYMS {
            for k in 0..PRIVATE {
                contexts.push((private_verb(i, j, k), 0.15 / (HYPONYMS * PRIVATE) as f64));
            }
        }
        out.push(Noun { lemma: hypernym_word(i), sentences: 1500, contexts });
    }
    for f in 0..FILLERS {
        let contexts = (0..GENERAL).map(|k| (general_verb(k), 1.0 / GENERAL as f64)).collect();
        out.push(Noun { lemma: format!("filler{f}"), sentences: 500, contexts });
    }
    out
}

/// A 50,000-sentence CoNLL corpus of `verb dobj-noun` sentences in which
/// every hyponym's contexts are a subset of its hypernym's and hypernyms
/// lean on widely shared verbs.
pub fn planted_corpus(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sentences: Vec<(usize, usize)> = Vec::new();
    let nouns = nouns();
    let dists: Vec<WeightedIndex<f64>> =
        nouns.iter().map(|n| WeightedIndex::new(n.contexts.iter().map(|c| c.1)).unwrap()).collect();
    for (ni, n) in nouns.iter().enumerate() {
        for _ in 0..n.sentences {
            sentences.push((ni, dists[ni].sample(&mut rng)));
        }
    }
    // interleave so corpus order carries no structure
    for i in (1..sentences.len()).rev() {
        sentences.swap(i, rng.gen_range(0..=i));
    }
    let mut out = String::with_capacity(sentences.len() * 64);
    for (ni, ci) in sentences {
        let n = &nouns[ni];
        let v = &n.contexts[ci].0;
        let _ = write!(out, "1\t{v}\t{v}\tVERB\t_\t_\t0\troot\n2\t{0}\t{0}\tNOUN\t_\t_\t1\tdobj\n\n", n.lemma);
    }
    out
}

/// The 100 planted `(hyponym, hypernym)` pairs.
pub fn planted_hypernyms() -> Vec<RelationPair> {
    let mut out = Vec::new();
    for i in 0..GROUPS {
        for j in 0..HYPONYMS {
            out.push(RelationPair::new(format!("{}-n", hyponym_word(i, j)), format!("{}-n", hypernym_word(i)), "hypernym"));
        }
    }
    out
}

/// Planted pairs plus each pair reversed, 200 pairs in all.
pub fn planted_dataset() -> Vec<RelationPair> {
    let hyper = planted_hypernyms();
    let reversed = hyper.iter().map(|p| RelationPair::new(p.y.clone(), p.x.clone(), "reversed"));
    hyper.clone().into_iter().chain(reversed).collect()
}

/// Parse `corpus` and build a PPMI space over its content words.
pub fn build_space(corpus: &str, spec: hypernym::ContextSpec) -> hypernym::Space {
    use hypernym::corpus::{build_vocabulary, for_each_context, parse_conll};
    use hypernym::space::CountAccumulator;
    let sentences: Vec<hypernym::Sentence> = parse_conll(corpus.as_bytes()).map(|s| s.unwrap()).collect();
    let vocab = build_vocabulary(&sentences, 1, &hypernym::Pos::CONTENT);
    let mut acc = CountAccumulator::new();
    for s in &sentences {
        for_each_context(s, &spec, &vocab, |t, c| acc.add(t, c));
    }
    let counts = acc.finish(vocab.len());
    hypernym::Space::new(vocab, spec, counts, hypernym::Weighting::Ppmi, false).unwrap()
}
