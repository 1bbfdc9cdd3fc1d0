use std::collections::HashMap;

use super::token::{lemma_pos_key, Pos, Sentence};

/// Interned lemma-POS keys with corpus frequencies. Ids are dense and follow
/// the lexicographic order of the keys.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    keys: Vec<String>,
    ids: HashMap<String, u32>,
    freq: Vec<u64>,
}

impl Vocabulary {
    /// Build from `(key, frequency)` entries; ids are assigned in sorted key
    /// order. Duplicate keys are summed.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (String, u64)>,
    {
        let mut merged: HashMap<String, u64> = HashMap::new();
        for (k, f) in entries {
            *merged.entry(k).or_default() += f;
        }
        let mut sorted: Vec<(String, u64)> = merged.into_iter().collect();
        sorted.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut vocab = Vocabulary::default();
        for (k, f) in sorted {
            vocab.ids.insert(k.clone(), vocab.keys.len() as u32);
            vocab.keys.push(k);
            vocab.freq.push(f);
        }
        vocab
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn id(&self, key: &str) -> Option<u32> {
        self.ids.get(key).copied()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.ids.contains_key(key)
    }

    pub fn key(&self, id: u32) -> &str {
        &self.keys[id as usize]
    }

    pub fn frequency(&self, id: u32) -> u64 {
        self.freq[id as usize]
    }

    pub fn pos(&self, id: u32) -> Pos {
        self.key(id)
            .rsplit_once('-')
            .and_then(|(_, p)| Pos::from_code(p))
            .unwrap_or(Pos::Other)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str, u64)> {
        self.keys
            .iter()
            .zip(&self.freq)
            .enumerate()
            .map(|(i, (k, f))| (i as u32, k.as_str(), *f))
    }
}

/// Frequency counter over lemma-POS keys. Counters over disjoint shards can
/// be merged in any order.
#[derive(Debug, Clone, Default)]
pub struct VocabCounter {
    counts: HashMap<String, u64>,
    allowed: Vec<Pos>,
}

impl VocabCounter {
    pub fn new(allowed_pos: &[Pos]) -> Self {
        VocabCounter {
            counts: HashMap::new(),
            allowed: allowed_pos.iter().copied().filter(|p| *p != Pos::Other).collect(),
        }
    }

    pub fn add_sentence(&mut self, sentence: &Sentence) {
        for tok in &sentence.tokens {
            if !self.allowed.contains(&tok.pos) {
                continue;
            }
            if let Some(key) = lemma_pos_key(&tok.lemma, tok.pos) {
                *self.counts.entry(key).or_default() += 1;
            }
        }
    }

    pub fn merge(mut self, other: VocabCounter) -> VocabCounter {
        let (mut big, small) = if self.counts.len() >= other.counts.len() {
            (std::mem::take(&mut self.counts), other.counts)
        } else {
            (other.counts, std::mem::take(&mut self.counts))
        };
        for (k, c) in small {
            *big.entry(k).or_default() += c;
        }
        VocabCounter { counts: big, allowed: self.allowed }
    }

    pub fn finish(self, min_freq: u64) -> Vocabulary {
        let min_freq = min_freq.max(1);
        Vocabulary::from_entries(self.counts.into_iter().filter(|(_, c)| *c >= min_freq))
    }
}

/// Count lemma-POS items over a corpus and keep those with an allowed POS and
/// frequency of at least `min_freq`.
pub fn build_vocabulary<'a, I>(sentences: I, min_freq: u64, allowed_pos: &[Pos]) -> Vocabulary
where
    I: IntoIterator<Item = &'a Sentence>,
{
    let mut counter = VocabCounter::new(allowed_pos);
    for s in sentences {
        counter.add_sentence(s);
    }
    counter.finish(min_freq)
}
