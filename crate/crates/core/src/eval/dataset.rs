use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;

pub const HYPERNYM: &str = "hypernym";

/// One `(x, y, relation)` record of a relation dataset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationPair {
    pub x: String,
    pub y: String,
    pub relation: String,
}

impl RelationPair {
    pub fn new(x: impl Into<String>, y: impl Into<String>, relation: impl Into<String>) -> Self {
        RelationPair { x: x.into(), y: y.into(), relation: relation.into() }
    }

    /// `hypernym` and BLESS's `hyper` both count.
    pub fn is_hypernym(&self) -> bool {
        is_hypernym_label(&self.relation)
    }
}

pub fn is_hypernym_label(label: &str) -> bool {
    label == HYPERNYM || label == "hyper"
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub pairs: Vec<RelationPair>,
    pub labels: BTreeSet<String>,
}

impl Dataset {
    pub fn from_pairs(pairs: Vec<RelationPair>) -> Self {
        let labels = pairs.iter().map(|p| p.relation.clone()).collect();
        Dataset { pairs, labels }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Label of `(x, y)`, preferring hypernymy when the pair has several.
    pub fn label_index(&self) -> HashMap<(&str, &str), &str> {
        let mut idx: HashMap<(&str, &str), &str> = HashMap::new();
        for p in &self.pairs {
            let e = idx.entry((p.x.as_str(), p.y.as_str())).or_insert(p.relation.as_str());
            if p.is_hypernym() {
                *e = p.relation.as_str();
            }
        }
        idx
    }
}

/// Read `x TAB y TAB relation` lines. Blank lines are skipped; further
/// columns are ignored.
pub fn read_dataset<R: BufRead>(input: R) -> Result<Dataset, EvalError> {
    let mut pairs = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t').map(str::trim);
        match (fields.next(), fields.next(), fields.next()) {
            (Some(x), Some(y), Some(rel)) if !x.is_empty() && !y.is_empty() && !rel.is_empty() => {
                pairs.push(RelationPair::new(x, y, rel));
            }
            _ => {
                return Err(EvalError::Format {
                    line: i + 1,
                    msg: format!("expected `x<TAB>y<TAB>relation`, got `{line}`"),
                })
            }
        }
    }
    Ok(Dataset::from_pairs(pairs))
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, EvalError> {
    read_dataset(BufReader::new(fs::File::open(path)?))
}

pub fn write_dataset<W: Write>(pairs: &[RelationPair], mut out: W) -> io::Result<()> {
    for p in pairs {
        writeln!(out, "{}\t{}\t{}", p.x, p.y, p.relation)?;
    }
    Ok(())
}

/// `original TAB canonical` label rewrites. A canonical label of `-` drops
/// the pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    map: HashMap<String, String>,
}

pub const DROP_LABEL: &str = "-";

impl LabelMap {
    pub fn read<R: BufRead>(input: R) -> Result<Self, EvalError> {
        let mut map = HashMap::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (from, to) = line.split_once('\t').ok_or_else(|| EvalError::Format {
                line: i + 1,
                msg: "expected `label<TAB>canonical`".into(),
            })?;
            map.insert(from.trim().to_owned(), to.trim().to_owned());
        }
        Ok(LabelMap { map })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EvalError> {
        Self::read(BufReader::new(fs::File::open(path)?))
    }

    pub fn apply(&self, pairs: Vec<RelationPair>) -> Vec<RelationPair> {
        pairs
            .into_iter()
            .filter_map(|mut p| {
                if let Some(to) = self.map.get(&p.relation) {
                    if to == DROP_LABEL {
                        return None;
                    }
                    p.relation = to.clone();
                }
                Some(p)
            })
            .collect()
    }
}

/// For untagged `(x, y)` emit `(x-p, y-p)` for each `p` in n, a, v when both
/// tagged words are known. Returns the tagged pairs and the number of input
/// pairs with no surviving variant.
pub fn pos_augment<K>(pairs: &[RelationPair], known: K) -> (Vec<RelationPair>, usize)
where
    K: Fn(&str) -> bool,
{
    let mut out = Vec::new();
    let mut dropped = 0;
    for p in pairs {
        let before = out.len();
        for code in ['n', 'a', 'v'] {
            let (x, y) = (format!("{}-{code}", p.x), format!("{}-{code}", p.y));
            if known(&x) && known(&y) {
                out.push(RelationPair::new(x, y, p.relation.clone()));
            }
        }
        if out.len() == before {
            dropped += 1;
        }
    }
    (out, dropped)
}

/// Collapse records of the same `(x, y)`: if any of them is a hypernym the
/// pair keeps only its hypernym label; otherwise distinct labels all stay.
/// Exact duplicates are removed. Order follows first occurrence.
pub fn conflate_multilabel(pairs: Vec<RelationPair>) -> Vec<RelationPair> {
    let hyper: HashSet<(String, String)> = pairs
        .iter()
        .filter(|p| p.is_hypernym())
        .map(|p| (p.x.clone(), p.y.clone()))
        .collect();
    let mut seen_hyper: HashSet<(String, String)> = HashSet::new();
    let mut seen: HashSet<RelationPair> = HashSet::new();
    let mut out = Vec::new();
    for p in pairs {
        let key = (p.x.clone(), p.y.clone());
        if hyper.contains(&key) {
            if p.is_hypernym() && seen_hyper.insert(key) {
                out.push(p);
            }
        } else if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_tsv() {
        let d = read_dataset("cat-n\tanimal-n\thypernym\n\ncar-n\twheel-n\tmeronym\textra\n".as_bytes()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.pairs[1], RelationPair::new("car-n", "wheel-n", "meronym"));
        assert_eq!(d.labels.len(), 2);
        assert!(read_dataset("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn bad_line_names_line_number() {
        let err = read_dataset("a\tb\thyper\nbroken line\n".as_bytes()).unwrap_err();
        match err {
            EvalError::Format { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn augment() {
        let known = |w: &str| ["cat-n", "animal-n", "light-n", "light-a", "bright-a"].contains(&w);
        let pairs = vec![
            RelationPair::new("cat", "animal", "hypernym"),
            RelationPair::new("xyzzy", "animal", "random"),
            RelationPair::new("light", "bright", "synonym"),
        ];
        let (out, dropped) = pos_augment(&pairs, known);
        assert_eq!(
            out,
            vec![
                RelationPair::new("cat-n", "animal-n", "hypernym"),
                RelationPair::new("light-a", "bright-a", "synonym"),
            ]
        );
        assert_eq!(dropped, 1);
    }

    #[test]
    fn conflation() {
        let out = conflate_multilabel(vec![
            RelationPair::new("a", "b", "synonym"),
            RelationPair::new("a", "b", "hypernym"),
            RelationPair::new("a", "b", "hypernym"),
        ]);
        assert_eq!(out, vec![RelationPair::new("a", "b", "hypernym")]);
        let plain = vec![RelationPair::new("a", "b", "meronym"), RelationPair::new("c", "d", "hypernym")];
        assert_eq!(conflate_multilabel(plain.clone()), plain);
        let both = vec![RelationPair::new("a", "b", "synonym"), RelationPair::new("a", "b", "antonym")];
        assert_eq!(conflate_multilabel(both.clone()), both);
    }

    #[test]
    fn label_map() {
        let m = LabelMap::read("HasA\tattribute\nentails\t-\n".as_bytes()).unwrap();
        let out = m.apply(vec![
            RelationPair::new("a", "b", "HasA"),
            RelationPair::new("c", "d", "entails"),
            RelationPair::new("e", "f", "hypernym"),
        ]);
        assert_eq!(out, vec![RelationPair::new("a", "b", "attribute"), RelationPair::new("e", "f", "hypernym")]);
    }
}
