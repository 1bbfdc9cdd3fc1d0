use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::RelationPair;

/// Share of pairs that goes to the test side.
pub const TEST_SHARE: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub test: Vec<RelationPair>,
    pub validation: Vec<RelationPair>,
    pub seed: u64,
}

/// Shuffle under `seed`; the first `ceil(0.9 n)` pairs become the test set.
pub fn split_random(pairs: &[RelationPair], seed: u64) -> DatasetSplit {
    let mut shuffled = pairs.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_test = (TEST_SHARE * pairs.len() as f64).ceil() as usize;
    let validation = shuffled.split_off(n_test.min(shuffled.len()));
    DatasetSplit { test: shuffled, validation, seed }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pool {
    Test,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexicalSplit {
    pub split: DatasetSplit,
    pub discarded: Vec<RelationPair>,
}

impl LexicalSplit {
    pub fn discard_fraction(&self) -> f64 {
        let total = self.split.test.len() + self.split.validation.len() + self.discarded.len();
        if total == 0 {
            0.0
        } else {
            self.discarded.len() as f64 / total as f64
        }
    }
}

/// Route pairs by the pool of their words. A pair whose words sit in
/// different pools (or in no pool) is discarded.
pub fn partition_by_pools(
    pairs: &[RelationPair],
    pools: &HashMap<String, Pool>,
    seed: u64,
) -> LexicalSplit {
    let mut test = Vec::new();
    let mut validation = Vec::new();
    let mut discarded = Vec::new();
    for p in pairs {
        match (pools.get(&p.x), pools.get(&p.y)) {
            (Some(Pool::Test), Some(Pool::Test)) => test.push(p.clone()),
            (Some(Pool::Validation), Some(Pool::Validation)) => validation.push(p.clone()),
            _ => discarded.push(p.clone()),
        }
    }
    LexicalSplit { split: DatasetSplit { test, validation, seed }, discarded }
}

/// Split so that test and validation share no word.
///
/// A connected group of words holding more pairs than the test share is cut
/// word by word, most connected words first: a word joins validation while
/// validation is under its share, otherwise it follows the pool holding most
/// of its already placed neighbours. Every other group is placed whole,
/// largest first, into whichever pool is further below its target.
pub fn split_lexical(pairs: &[RelationPair], seed: u64) -> LexicalSplit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut words: Vec<&str> = pairs.iter().flat_map(|p| [p.x.as_str(), p.y.as_str()]).collect();
    words.sort_unstable();
    words.dedup();
    words.shuffle(&mut rng);
    let index: HashMap<&str, usize> = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); words.len()];
    let mut uf = UnionFind::new(words.len());
    for p in pairs {
        let (a, b) = (index[p.x.as_str()], index[p.y.as_str()]);
        adj[a].push(b);
        if a != b {
            adj[b].push(a);
        }
        uf.union(a, b);
    }

    // Pairs per component, keyed by the component's smallest shuffled index
    // so the ordering only depends on the seed.
    let mut comp_pairs: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comp_words: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for w in 0..words.len() {
        comp_words.entry(uf.find(w)).or_default().push(w);
    }
    for p in pairs {
        *comp_pairs.entry(uf.find(index[p.x.as_str()])).or_default() += 1;
    }
    let mut comps: Vec<(usize, Vec<usize>)> = comp_words
        .into_iter()
        .map(|(root, ws)| (comp_pairs.get(&root).copied().unwrap_or(0), ws))
        .collect();
    comps.sort_by(|a, b| b.0.cmp(&a.0).then(a.1[0].cmp(&b.1[0])));

    let total = pairs.len() as f64;
    let mut pool: Vec<Option<Pool>> = vec![None; words.len()];
    let (mut kept_t, mut kept_v) = (0usize, 0usize);
    let (oversized, whole): (Vec<_>, Vec<_>) = comps.into_iter().partition(|(n, _)| *n as f64 > TEST_SHARE * total);

    for (_, ws) in oversized {
        let mut order = ws;
        order.sort_by(|&a, &b| adj[b].len().cmp(&adj[a].len()).then(a.cmp(&b)));
        for w in order {
            let (mut gain_t, mut gain_v) = (0usize, 0usize);
            for &u in &adj[w] {
                if u == w {
                    gain_t += 1;
                    gain_v += 1;
                    continue;
                }
                match pool[u] {
                    Some(Pool::Test) => gain_t += 1,
                    Some(Pool::Validation) => gain_v += 1,
                    None => {}
                }
            }
            let under = (kept_v as f64) < (1.0 - TEST_SHARE) * (kept_t + kept_v) as f64;
            let p = if under || gain_v > gain_t { Pool::Validation } else { Pool::Test };
            pool[w] = Some(p);
            match p {
                Pool::Test => kept_t += gain_t,
                Pool::Validation => kept_v += gain_v,
            }
        }
    }

    for (n, ws) in whole {
        let t_room = TEST_SHARE * total - kept_t as f64;
        let v_room = (1.0 - TEST_SHARE) * total - kept_v as f64;
        let p = if v_room / (1.0 - TEST_SHARE) > t_room / TEST_SHARE { Pool::Validation } else { Pool::Test };
        for w in ws {
            pool[w] = Some(p);
        }
        match p {
            Pool::Test => kept_t += n,
            Pool::Validation => kept_v += n,
        }
    }

    let pools: HashMap<String, Pool> = words
        .iter()
        .zip(&pool)
        .filter_map(|(w, p)| p.map(|p| ((*w).to_owned(), p)))
        .collect();
    partition_by_pools(pairs, &pools, seed)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    // The smaller index becomes the root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
