use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::rank::{average_precision_at_k, rank, Cutoff, RelationFilter, ScoredItem};
use super::EvalError;

/// Configuration a set of scores came from, carried into the report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunInfo {
    pub dataset: String,
    pub measure: String,
    pub params: String,
    pub context_type: String,
    pub weighting: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApValue {
    pub k: Cutoff,
    pub ap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    #[serde(flatten)]
    pub info: RunInfo,
    pub relation: String,
    pub ap: Vec<ApValue>,
    pub positives: usize,
    pub negatives: usize,
    pub scoreless: usize,
}

impl EvaluationReport {
    pub fn ap_at(&self, k: Cutoff) -> Option<f64> {
        self.ap.iter().find(|v| v.k == k).map(|v| v.ap)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

/// Rank the admitted pairs and compute AP at every cutoff. Hypernym pairs
/// are the positives.
pub fn evaluate(
    items: &[ScoredItem],
    filter: &RelationFilter,
    cutoffs: &[Cutoff],
    info: RunInfo,
) -> Result<EvaluationReport, EvalError> {
    let admitted: Vec<ScoredItem> = items.iter().filter(|i| filter.admits(&i.relation)).cloned().collect();
    let ranked = rank(&admitted);
    let relevant: Vec<bool> = ranked.iter().map(|i| i.is_hypernym()).collect();
    let positives = relevant.iter().filter(|&&r| r).count();
    let ap = cutoffs
        .iter()
        .map(|&k| Ok(ApValue { k, ap: average_precision_at_k(&relevant, k)? }))
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(EvaluationReport {
        info,
        relation: filter.to_string(),
        ap,
        positives,
        negatives: relevant.len() - positives,
        scoreless: ranked.iter().filter(|i| i.score.is_none()).count(),
    })
}

/// Markdown summary table, one row per report.
pub fn markdown_table(reports: &[EvaluationReport]) -> String {
    let mut cutoffs: Vec<Cutoff> = Vec::new();
    for r in reports {
        for v in &r.ap {
            if !cutoffs.contains(&v.k) {
                cutoffs.push(v.k);
            }
        }
    }
    let mut out = String::from("| dataset | relation | measure | context type | feature weighting | hyper-parameters |");
    for k in &cutoffs {
        let _ = write!(out, " AP@{k} |");
    }
    out.push_str("\n|---|---|---|---|---|---|");
    for _ in &cutoffs {
        out.push_str("---|");
    }
    out.push('\n');
    for r in reports {
        let _ = write!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.info.dataset, r.relation, r.info.measure, r.info.context_type, r.info.weighting, r.info.params
        );
        for k in &cutoffs {
            match r.ap_at(*k) {
                Some(v) => {
                    let _ = write!(out, " {v:.2} |");
                }
                None => out.push_str(" - |"),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn item(x: &str, rel: &str, score: Option<f64>) -> ScoredItem {
        ScoredItem { x: x.into(), y: "y".into(), relation: rel.into(), score }
    }

    fn toy(hyper_high: bool) -> Vec<ScoredItem> {
        let (h, m) = if hyper_high { (2.0, 1.0) } else { (1.0, 2.0) };
        vec![
            item("a", "hypernym", Some(h)),
            item("b", "hypernym", Some(h + 0.5)),
            item("c", "meronym", Some(m)),
            item("d", "meronym", Some(m + 0.5)),
        ]
    }

    #[test]
    fn toy_dataset() {
        let only = RelationFilter::Only("meronym".into());
        let r = evaluate(&toy(true), &only, &[Cutoff::All], RunInfo::default()).unwrap();
        assert_eq!(r.ap_at(Cutoff::All), Some(1.0));
        let r = evaluate(&toy(false), &only, &[Cutoff::All], RunInfo::default()).unwrap();
        assert!((r.ap_at(Cutoff::All).unwrap() - 0.41667).abs() < 1e-5);
        assert_eq!((r.positives, r.negatives, r.scoreless), (2, 2, 0));
    }

    #[test]
    fn single_relation_filter_excludes_others() {
        let mut items = toy(true);
        items.push(item("e", "antonym", Some(0.1)));
        let r = evaluate(&items, &"antonym".parse().unwrap(), &[Cutoff::All], RunInfo::default()).unwrap();
        assert_eq!((r.positives, r.negatives), (2, 1));
        let r = evaluate(&items, &RelationFilter::All, &[Cutoff::All], RunInfo::default()).unwrap();
        assert_eq!((r.positives, r.negatives), (2, 3));
        assert_eq!(r.relation, "all");
    }

    #[test]
    fn scoreless_rank_last() {
        let items = vec![item("a", "hypernym", None), item("b", "random", Some(-5.0))];
        let r = evaluate(&items, &RelationFilter::All, &[Cutoff::All], RunInfo::default()).unwrap();
        assert_eq!(r.ap_at(Cutoff::All), Some(0.5));
        assert_eq!(r.scoreless, 1);
    }

    #[test]
    fn report_renders() {
        let info = RunInfo {
            dataset: "toy".into(),
            measure: "inv_cl".into(),
            params: "-".into(),
            context_type: "dep".into(),
            weighting: "ppmi".into(),
        };
        let r = evaluate(&toy(true), &RelationFilter::All, &[Cutoff::At(100), Cutoff::All], info).unwrap();
        let line = r.to_json_line();
        assert!(line.contains("\"measure\":\"inv_cl\""));
        let back: EvaluationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
        let md = markdown_table(&[r]);
        assert!(md.contains("| AP@100 | AP@all |"));
        assert!(md.contains("| toy | all | inv_cl | dep | ppmi | - | 1.00 | 1.00 |"));
    }

    proptest! {
        #[test]
        fn monotone_transform_keeps_ap(scores in prop::collection::vec(-10.0f64..10.0, 2..40), labels in prop::collection::vec(any::<bool>(), 40)) {
            prop_assume!(labels[..scores.len()].iter().any(|&b| b));
            let items: Vec<ScoredItem> = scores.iter().enumerate().map(|(i, &s)| {
                item(&format!("w{i:02}"), if labels[i] { "hypernym" } else { "random" }, Some(s))
            }).collect();
            let moved: Vec<ScoredItem> = items.iter().map(|i| ScoredItem {
                score: i.score.map(|s| (s * 0.5).exp() + 3.0),
                ..i.clone()
            }).collect();
            let ks = [Cutoff::At(5), Cutoff::All];
            let a = evaluate(&items, &RelationFilter::All, &ks, RunInfo::default()).unwrap();
            let b = evaluate(&moved, &RelationFilter::All, &ks, RunInfo::default()).unwrap();
            prop_assert_eq!(a.ap, b.ap);
        }
    }
}
