use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::RelationPair;

pub const SWITCHED: &str = "random-switched";

/// For each hypernym pair `(x1, y1)` draw `y2` from the hypernyms of other
/// pairs such that `(x1, y2)` is not in the dataset and was not already
/// drawn for `x1`. Emits `(x1, y2)` labelled `random-switched`; a pair with
/// no admissible `y2` produces nothing.
pub fn switched_pairs(pairs: &[RelationPair], seed: u64) -> Vec<RelationPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hypernyms: BTreeSet<&str> = pairs.iter().filter(|p| p.is_hypernym()).map(|p| p.y.as_str()).collect();
    let hypernyms: Vec<&str> = hypernyms.into_iter().collect();
    let mut taken: HashSet<(&str, &str)> = pairs.iter().map(|p| (p.x.as_str(), p.y.as_str())).collect();

    let mut out = Vec::new();
    for p in pairs.iter().filter(|p| p.is_hypernym()) {
        let candidates: Vec<&str> = hypernyms
            .iter()
            .copied()
            .filter(|&y2| y2 != p.y && !taken.contains(&(p.x.as_str(), y2)))
            .collect();
        if let Some(&y2) = candidates.choose(&mut rng) {
            taken.insert((p.x.as_str(), y2));
            out.push(RelationPair::new(p.x.clone(), y2, SWITCHED));
        }
    }
    out
}
