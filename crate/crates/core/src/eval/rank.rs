use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{EvalError, RelationPair};

/// One dataset pair with its measure score, `None` when the measure was
/// undefined for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredItem {
    pub x: String,
    pub y: String,
    pub relation: String,
    pub score: Option<f64>,
}

impl ScoredItem {
    pub fn new(pair: &RelationPair, score: Option<f64>) -> Self {
        ScoredItem {
            x: pair.x.clone(),
            y: pair.y.clone(),
            relation: pair.relation.clone(),
            score: score.filter(|s| !s.is_nan()),
        }
    }

    pub fn is_hypernym(&self) -> bool {
        super::dataset::is_hypernym_label(&self.relation)
    }
}

/// Rank cut-off for AP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cutoff {
    At(usize),
    All,
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::At(k) => write!(f, "{k}"),
            Cutoff::All => f.write_str("all"),
        }
    }
}

impl FromStr for Cutoff {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(Cutoff::All);
        }
        match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Cutoff::At(k)),
            _ => Err(format!("invalid cutoff `{s}` (expected a positive integer or `all`)")),
        }
    }
}

impl Serialize for Cutoff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cutoff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which pairs enter a ranking: hypernyms against everything, or against a
/// single other relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelationFilter {
    All,
    Only(String),
}

impl RelationFilter {
    pub fn admits(&self, relation: &str) -> bool {
        match self {
            RelationFilter::All => true,
            RelationFilter::Only(r) => r == relation || super::dataset::is_hypernym_label(relation),
        }
    }
}

impl fmt::Display for RelationFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationFilter::All => f.write_str("all"),
            RelationFilter::Only(r) => f.write_str(r),
        }
    }
}

impl FromStr for RelationFilter {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(if s == "all" { RelationFilter::All } else { RelationFilter::Only(s.to_owned()) })
    }
}

/// Score descending, ties by `(x, y)` ascending; scoreless items after all
/// scored ones, again by `(x, y)`.
pub fn ranking_order(a: &ScoredItem, b: &ScoredItem) -> Ordering {
    let key = |i: &ScoredItem| (i.x.clone(), i.y.clone());
    match (a.score, b.score) {
        (Some(sa), Some(sb)) => sb.total_cmp(&sa).then_with(|| key(a).cmp(&key(b))),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => key(a).cmp(&key(b)),
    }
}

pub fn rank(items: &[ScoredItem]) -> Vec<&ScoredItem> {
    let mut out: Vec<&ScoredItem> = items.iter().collect();
    out.sort_by(|a, b| ranking_order(a, b));
    out
}

/// AP of a ranked relevance list, normalised by `min(k, positives)`.
pub fn average_precision_at_k(relevant: &[bool], k: Cutoff) -> Result<f64, EvalError> {
    let positives = relevant.iter().filter(|&&r| r).count();
    if positives == 0 {
        return Err(EvalError::UndefinedAp);
    }
    let depth = match k {
        Cutoff::At(k) => k.min(relevant.len()),
        Cutoff::All => relevant.len(),
    };
    let norm = match k {
        Cutoff::At(k) => k.min(positives),
        Cutoff::All => positives,
    };
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (r, &rel) in relevant[..depth].iter().enumerate() {
        if rel {
            hits += 1;
            sum += hits as f64 / (r + 1) as f64;
        }
    }
    Ok(sum / norm as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-5
    }

    #[test]
    fn textbook_examples() {
        assert!(close(average_precision_at_k(&[true, false, true], Cutoff::All).unwrap(), 0.83333));
        assert_eq!(average_precision_at_k(&[true, true, false], Cutoff::All).unwrap(), 1.0);
        assert_eq!(average_precision_at_k(&[false, true], Cutoff::At(1)).unwrap(), 0.0);
        assert!(matches!(average_precision_at_k(&[false, false], Cutoff::All), Err(EvalError::UndefinedAp)));
        assert!(matches!(average_precision_at_k(&[], Cutoff::At(3)), Err(EvalError::UndefinedAp)));
    }

    #[test]
    fn cutoff_parsing() {
        assert_eq!("100".parse::<Cutoff>().unwrap(), Cutoff::At(100));
        assert_eq!("all".parse::<Cutoff>().unwrap(), Cutoff::All);
        assert!("0".parse::<Cutoff>().is_err());
        assert_eq!(serde_json::to_string(&Cutoff::At(5)).unwrap(), "\"5\"");
    }

    #[test]
    fn ranking_puts_scoreless_last() {
        let p = |x: &str, s: Option<f64>| ScoredItem {
            x: x.into(),
            y: "y".into(),
            relation: "hypernym".into(),
            score: s,
        };
        let items = vec![p("d", None), p("c", Some(1.0)), p("b", Some(2.0)), p("a", Some(1.0)), p("0", None)];
        let order: Vec<&str> = rank(&items).iter().map(|i| i.x.as_str()).collect();
        assert_eq!(order, ["b", "a", "c", "0", "d"]);
    }

    // Literal definition: precision at each positive rank within the cut.
    fn brute(rel: &[bool], k: Option<usize>) -> Option<f64> {
        let pos = rel.iter().filter(|&&r| r).count();
        if pos == 0 {
            return None;
        }
        let k_eff = k.unwrap_or(rel.len());
        let mut total = 0.0;
        for r in 1..=k_eff.min(rel.len()) {
            if rel[r - 1] {
                let prec = rel[..r].iter().filter(|&&b| b).count() as f64 / r as f64;
                total += prec;
            }
        }
        Some(total / k.map_or(pos, |k| k.min(pos)) as f64)
    }

    proptest! {
        #[test]
        fn matches_brute_force(rel in prop::collection::vec(any::<bool>(), 0..50), k in 1usize..60) {
            let got = average_precision_at_k(&rel, Cutoff::At(k)).ok();
            prop_assert_eq!(got, brute(&rel, Some(k)));
            let got = average_precision_at_k(&rel, Cutoff::All).ok();
            prop_assert_eq!(got, brute(&rel, None));
        }

        #[test]
        fn perfect_iff_positives_lead(rel in prop::collection::vec(any::<bool>(), 1..50)) {
            prop_assume!(rel.iter().any(|&r| r));
            let ap = average_precision_at_k(&rel, Cutoff::All).unwrap();
            let first_neg = rel.iter().position(|&r| !r).unwrap_or(rel.len());
            let separated = rel[first_neg..].iter().all(|&r| !r);
            prop_assert_eq!(ap == 1.0, separated);
            prop_assert!((0.0..=1.0).contains(&ap));
        }
    }
}
