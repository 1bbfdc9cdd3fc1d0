use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rank::{Cutoff, RelationFilter, ScoredItem};
use super::report::{evaluate, RunInfo};
use super::{EvalError, RelationPair};
use crate::measures::{Aggregate, Measure, MeasureConfig};
use crate::space::SortWeighting;

/// Default search grid: N in {100, 500, 1000} for APSyn and RCTC; N in
/// {50, 70, 100} crossed with both aggregates and both sort weightings for
/// SLQS and SLQS Sub. Other measures get their single default point.
pub fn default_grid(measure: Measure) -> Vec<MeasureConfig> {
    let base = MeasureConfig::new(measure);
    match measure {
        Measure::Apsyn | Measure::Rctc => [100, 500, 1000].iter().map(|&n| base.with_n(n)).collect(),
        Measure::Slqs | Measure::SlqsSub => {
            let mut grid = Vec::new();
            for n in [50, 70, 100] {
                for agg in [Aggregate::Median, Aggregate::Average] {
                    for sort in [SortWeighting::Ppmi, SortWeighting::Plmi] {
                        grid.push(base.with_n(n).with_aggregate(agg).with_sort(sort));
                    }
                }
            }
            grid
        }
        _ => vec![base.canonical()],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub config: MeasureConfig,
    pub ap_at_100: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneOutcome {
    pub best: MeasureConfig,
    pub ap_at_100: f64,
    pub trials: Vec<Trial>,
}

// Smaller N, then median, then ppmi.
fn preference(a: &MeasureConfig, b: &MeasureConfig) -> Ordering {
    let agg = |c: &MeasureConfig| c.aggregate != Aggregate::Median;
    let sort = |c: &MeasureConfig| c.sort_weighting != SortWeighting::Ppmi;
    a.n.cmp(&b.n).then(agg(a).cmp(&agg(b))).then(sort(a).cmp(&sort(b)))
}

/// Evaluate every grid point by AP@100 on `validation` and keep the best.
/// `score` must be deterministic; grid points are scored in parallel.
pub fn tune<S>(
    grid: &[MeasureConfig],
    validation: &[RelationPair],
    filter: &RelationFilter,
    score: S,
) -> Result<TuneOutcome, EvalError>
where
    S: Fn(&MeasureConfig, &RelationPair) -> Option<f64> + Sync,
{
    if grid.is_empty() {
        return Err(EvalError::EmptyGrid);
    }
    let trials = grid
        .par_iter()
        .map(|cfg| {
            let items: Vec<ScoredItem> = validation.iter().map(|p| ScoredItem::new(p, score(cfg, p))).collect();
            let report = evaluate(&items, filter, &[Cutoff::At(100)], RunInfo::default())?;
            Ok(Trial { config: *cfg, ap_at_100: report.ap[0].ap })
        })
        .collect::<Result<Vec<Trial>, EvalError>>()?;
    let best = trials
        .iter()
        .min_by(|a, b| b.ap_at_100.total_cmp(&a.ap_at_100).then_with(|| preference(&a.config, &b.config)))
        .expect("grid is non-empty");
    Ok(TuneOutcome { best: best.config, ap_at_100: best.ap_at_100, trials: trials.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn validation() -> Vec<RelationPair> {
        (0..10)
            .map(|i| RelationPair::new(format!("x{i}"), format!("y{i}"), if i % 2 == 0 { "hypernym" } else { "random" }))
            .collect()
    }

    #[test]
    fn best_point_wins() {
        let grid = [MeasureConfig::new(Measure::Slqs).with_n(50), MeasureConfig::new(Measure::Slqs).with_n(100)];
        // N=100 orders the hypernyms first; N=50 orders them last.
        let score = |cfg: &MeasureConfig, p: &RelationPair| {
            let good = p.is_hypernym() == (cfg.n == 100);
            Some(if good { 1.0 } else { 0.0 })
        };
        let out = tune(&grid, &validation(), &RelationFilter::All, score).unwrap();
        assert_eq!(out.best.n, 100);
        assert_eq!(out.ap_at_100, 1.0);
        assert_eq!(out.trials.len(), 2);
    }

    #[test]
    fn single_point() {
        let grid = [MeasureConfig::new(Measure::Apsyn).with_n(500)];
        let out = tune(&grid, &validation(), &RelationFilter::All, |_, _| Some(0.0)).unwrap();
        assert_eq!(out.best, grid[0]);
    }

    #[test]
    fn ties_prefer_small_n_median_ppmi() {
        let grid = default_grid(Measure::SlqsSub);
        assert_eq!(grid.len(), 12);
        let mut reversed = grid.clone();
        reversed.reverse();
        let out = tune(&reversed, &validation(), &RelationFilter::All, |_, _| Some(1.0)).unwrap();
        assert_eq!(out.best.n, 50);
        assert_eq!(out.best.aggregate, Aggregate::Median);
        assert_eq!(out.best.sort_weighting, SortWeighting::Ppmi);
    }

    #[test]
    fn grids() {
        assert_eq!(default_grid(Measure::Rctc).iter().map(|c| c.n).collect::<Vec<_>>(), [100, 500, 1000]);
        assert_eq!(default_grid(Measure::InvCl).len(), 1);
        assert!(matches!(tune(&[], &validation(), &RelationFilter::All, |_, _| None), Err(EvalError::EmptyGrid)));
    }
}
