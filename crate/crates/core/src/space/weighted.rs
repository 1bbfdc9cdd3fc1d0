use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ContextSpec, Vocabulary};
use crate::Scalar;

use super::matrix::{ContextIndex, CooccurrenceMatrix};
use super::SpaceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Freq,
    Ppmi,
    Plmi,
}

/// Weighting used only to order a target's contexts by relevance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortWeighting {
    Ppmi,
    Plmi,
}

impl Weighting {
    pub fn name(self) -> &'static str {
        match self {
            Weighting::Freq => "freq",
            Weighting::Ppmi => "ppmi",
            Weighting::Plmi => "plmi",
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            Weighting::Freq => 0,
            Weighting::Ppmi => 1,
            Weighting::Plmi => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Weighting::Freq),
            1 => Some(Weighting::Ppmi),
            2 => Some(Weighting::Plmi),
            _ => None,
        }
    }
}

impl SortWeighting {
    pub fn name(self) -> &'static str {
        match self {
            SortWeighting::Ppmi => "ppmi",
            SortWeighting::Plmi => "plmi",
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for SortWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "freq" => Ok(Weighting::Freq),
            "ppmi" => Ok(Weighting::Ppmi),
            "plmi" => Ok(Weighting::Plmi),
            _ => Err(format!("unknown weighting `{s}` (expected freq, ppmi or plmi)")),
        }
    }
}

impl FromStr for SortWeighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ppmi" => Ok(SortWeighting::Ppmi),
            "plmi" => Ok(SortWeighting::Plmi),
            _ => Err(format!("unknown sort weighting `{s}` (expected ppmi or plmi)")),
        }
    }
}

/// `max(log2(count * total / (row_sum * col_sum)), 0)`
pub fn ppmi<F: Scalar>(count: u64, row_sum: u64, col_sum: u64, total: u64) -> F {
    if count == 0 {
        return F::zero();
    }
    let ratio = (F::from_count(count) * F::from_count(total))
        / (F::from_count(row_sum) * F::from_count(col_sum));
    ratio.log2().max(F::zero())
}

fn cell_weight<F: Scalar>(w: Weighting, m: &CooccurrenceMatrix, t: u32, c: u32, n: u64) -> F {
    match w {
        Weighting::Freq => F::from_count(n),
        Weighting::Ppmi => ppmi(n, m.row_sum(t), m.col_sum(c), m.total()),
        Weighting::Plmi => F::from_count(n) * ppmi(n, m.row_sum(t), m.col_sum(c), m.total()),
    }
}

/// A target's contexts ordered by weight, highest first. Ties go to the lower
/// context id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedContexts {
    pub target: u32,
    pub ordering: Vec<u32>,
}

impl RankedContexts {
    /// 1-based rank of `c`, `None` when `c` is not in the ordering.
    pub fn rank(&self, c: u32) -> Option<usize> {
        self.ordering.iter().position(|&x| x == c).map(|p| p + 1)
    }

    pub fn len(&self) -> usize {
        self.ordering.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordering.is_empty()
    }
}

/// Sort `(context, value)` cells by value descending, context id ascending.
pub(crate) fn rank_cells<F: Scalar>(cells: &mut [(u32, F)]) {
    cells.sort_unstable_by(|a, b| {
        b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0))
    });
}

/// A count matrix together with one weighting of its cells and cached
/// entropies.
///
/// The weighted values share the count matrix's sparsity pattern except that
/// cells whose weight is not positive (PMI <= 0) are dropped. Entropies are
/// always computed from the raw counts.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpace<F> {
    pub(crate) vocab: Vocabulary,
    pub(crate) context_spec: ContextSpec,
    pub(crate) base: CooccurrenceMatrix,
    pub(crate) weighting: Weighting,
    pub(crate) normalize_entropy: bool,
    pub(crate) row_ptr: Vec<usize>,
    pub(crate) cols: Vec<u32>,
    pub(crate) values: Vec<F>,
    pub(crate) ctx_entropy: Vec<F>,
    pub(crate) row_entropy: Vec<F>,
}

impl<F: Scalar> WeightedSpace<F> {
    /// Weight `base`. Rows of `base` are vocabulary ids of `vocab`.
    pub fn new(
        vocab: Vocabulary,
        context_spec: ContextSpec,
        base: CooccurrenceMatrix,
        weighting: Weighting,
        normalize_entropy: bool,
    ) -> Result<Self, SpaceError> {
        if base.n_rows() != vocab.len() {
            return Err(SpaceError::Shape {
                rows: base.n_rows(),
                vocab: vocab.len(),
            });
        }
        if weighting != Weighting::Freq && base.total() == 0 {
            return Err(SpaceError::DegenerateSpace);
        }
        let mut row_ptr = Vec::with_capacity(base.n_rows() + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for t in 0..base.n_rows() as u32 {
            let (cs, ns) = base.row(t);
            for (&c, &n) in cs.iter().zip(ns) {
                let v: F = cell_weight(weighting, &base, t, c, n);
                if v > F::zero() {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(Self::assemble(vocab, context_spec, base, weighting, normalize_entropy, row_ptr, cols, values))
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        vocab: Vocabulary,
        context_spec: ContextSpec,
        base: CooccurrenceMatrix,
        weighting: Weighting,
        normalize_entropy: bool,
        row_ptr: Vec<usize>,
        cols: Vec<u32>,
        values: Vec<F>,
    ) -> Self {
        let ctx_entropy = base.context_entropies(normalize_entropy);
        let row_entropy = (0..base.n_rows() as u32)
            .map(|t| base.row_entropy(t, normalize_entropy).unwrap_or(F::zero()))
            .collect();
        WeightedSpace {
            vocab,
            context_spec,
            base,
            weighting,
            normalize_entropy,
            row_ptr,
            cols,
            values,
            ctx_entropy,
            row_entropy,
        }
    }

    /// Re-weight the same counts.
    pub fn reweight(&self, weighting: Weighting) -> Result<Self, SpaceError> {
        Self::new(
            self.vocab.clone(),
            self.context_spec,
            self.base.clone(),
            weighting,
            self.normalize_entropy,
        )
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn contexts(&self) -> &ContextIndex {
        self.base.contexts()
    }

    pub fn context_spec(&self) -> &ContextSpec {
        &self.context_spec
    }

    pub fn base(&self) -> &CooccurrenceMatrix {
        &self.base
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn normalizes_entropy(&self) -> bool {
        self.normalize_entropy
    }

    pub fn n_targets(&self) -> usize {
        self.base.n_rows()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn target_id(&self, key: &str) -> Option<u32> {
        self.vocab.id(key)
    }

    /// Context ids (ascending) and weighted values of row `t`.
    pub fn row(&self, t: u32) -> (&[u32], &[F]) {
        let (a, b) = (self.row_ptr[t as usize], self.row_ptr[t as usize + 1]);
        (&self.cols[a..b], &self.values[a..b])
    }

    pub fn value(&self, t: u32, c: u32) -> F {
        let (cols, vals) = self.row(t);
        cols.binary_search(&c).map(|i| vals[i]).unwrap_or(F::zero())
    }

    /// Row `t` ranked by this space's own weighting.
    pub fn ranked(&self, t: u32) -> RankedContexts {
        let (cols, vals) = self.row(t);
        let mut cells: Vec<(u32, F)> = cols.iter().copied().zip(vals.iter().copied()).collect();
        rank_cells(&mut cells);
        RankedContexts { target: t, ordering: cells.into_iter().map(|(c, _)| c).collect() }
    }

    /// The first `n` contexts of `t` under `sort`, which may differ from the
    /// space's weighting. Only contexts with a positive sort weight count.
    pub fn top_contexts(&self, t: u32, n: usize, sort: SortWeighting) -> Result<RankedContexts, SpaceError> {
        let (cols, counts) = self.base.row(t);
        let (rs, total) = (self.base.row_sum(t), self.base.total());
        let mut cells: Vec<(u32, F)> = cols
            .iter()
            .zip(counts)
            .filter_map(|(&c, &k)| {
                let p: F = ppmi(k, rs, self.base.col_sum(c), total);
                let v = match sort {
                    SortWeighting::Ppmi => p,
                    SortWeighting::Plmi => F::from_count(k) * p,
                };
                (v > F::zero()).then_some((c, v))
            })
            .collect();
        if cells.is_empty() {
            return Err(SpaceError::EmptyRow(t));
        }
        rank_cells(&mut cells);
        cells.truncate(n);
        Ok(RankedContexts { target: t, ordering: cells.into_iter().map(|(c, _)| c).collect() })
    }

    pub fn context_entropy(&self, c: u32) -> Result<F, SpaceError> {
        match self.base.col_sums.get(c as usize) {
            Some(&s) if s > 0 => Ok(self.ctx_entropy[c as usize]),
            _ => Err(SpaceError::UnknownContext(c)),
        }
    }

    pub fn row_entropy(&self, t: u32) -> Result<F, SpaceError> {
        match self.base.row_sums.get(t as usize) {
            Some(&s) if s > 0 => Ok(self.row_entropy[t as usize]),
            _ => Err(SpaceError::EmptyRow(t)),
        }
    }

    /// Plain-text dump: `target TAB context TAB value`, rows in id order.
    pub fn export_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        for t in 0..self.n_targets() as u32 {
            let (cols, vals) = self.row(t);
            for (&c, v) in cols.iter().zip(vals) {
                writeln!(out, "{}\t{}\t{}", self.vocab.key(t), self.contexts().name(c), v)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ContextSpec, CoocEvent};
    use crate::space::accumulate;
    use proptest::prelude::*;

    fn toy(weighting: Weighting) -> WeightedSpace<f64> {
        let vocab = Vocabulary::from_entries([("x-n".to_string(), 3), ("y-n".to_string(), 1)]);
        let ev = |t, c: &str| CoocEvent { target: t, context: c.to_string() };
        let m = accumulate(2, vec![ev(0, "a"), ev(0, "a"), ev(0, "b"), ev(1, "b")]);
        WeightedSpace::new(vocab, ContextSpec::window(2, false), m, weighting, false).unwrap()
    }

    #[test]
    fn ppmi_example() {
        let s = toy(Weighting::Ppmi);
        let (a, b) = (s.contexts().id("a").unwrap(), s.contexts().id("b").unwrap());
        assert!((s.value(0, a) - (4.0f64 / 3.0).log2()).abs() < 1e-15);
        assert!((s.value(0, a) - 0.41504).abs() < 1e-5);
        // PMI(x,b) < 0
        assert_eq!(s.value(0, b), 0.0);
        assert_eq!(s.row(0).0, &[a]);
        let p = toy(Weighting::Plmi);
        assert!((p.value(0, a) - 0.83007).abs() < 1e-5);
        let f = toy(Weighting::Freq);
        assert_eq!(f.value(0, a), 2.0);
        assert_eq!(f.nnz(), 3);
    }

    #[test]
    fn degenerate() {
        let vocab = Vocabulary::from_entries([("x-n".to_string(), 1)]);
        let m = accumulate(1, Vec::new());
        let r = WeightedSpace::<f64>::new(vocab.clone(), ContextSpec::dep(), m.clone(), Weighting::Ppmi, false);
        assert!(matches!(r, Err(SpaceError::DegenerateSpace)));
        assert!(WeightedSpace::<f64>::new(vocab, ContextSpec::dep(), m, Weighting::Freq, false).is_ok());
    }

    fn ranked_space(values: &[(u32, u64)]) -> WeightedSpace<f64> {
        let names = (0..values.len()).map(|i| format!("c{i}")).collect();
        let m = CooccurrenceMatrix::from_triples(1, ContextIndex::from_names(names), values.iter().map(|&(c, n)| (0, c, n)));
        let vocab = Vocabulary::from_entries([("t-n".to_string(), 1)]);
        WeightedSpace::new(vocab, ContextSpec::dep(), m, Weighting::Freq, false).unwrap()
    }

    #[test]
    fn ranking_and_ties() {
        let s = ranked_space(&[(0, 4), (1, 12), (2, 7)]);
        assert_eq!(s.ranked(0).ordering, vec![1, 2, 0]);
        let s = ranked_space(&[(0, 5), (1, 5)]);
        assert_eq!(s.ranked(0).ordering, vec![0, 1]);
        assert_eq!(s.ranked(0).rank(1), Some(2));
    }

    #[test]
    fn top_contexts_examples() {
        // row 0 has PPMI a~0.44, b~1.44, c~0.86
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string(), "d".to_string()];
        let m = CooccurrenceMatrix::from_triples(
            2,
            ContextIndex::from_names(names),
            [(0, 0, 1), (0, 1, 4), (0, 2, 2), (1, 0, 1), (1, 2, 1), (1, 3, 10)],
        );
        let vocab = Vocabulary::from_entries([("t-n".to_string(), 1), ("u-n".to_string(), 1)]);
        let s = WeightedSpace::<f64>::new(vocab, ContextSpec::dep(), m, Weighting::Freq, false).unwrap();
        let top = s.top_contexts(0, 2, SortWeighting::Ppmi).unwrap();
        assert_eq!(top.ordering, vec![1, 2]);
        let all = s.top_contexts(0, 10, SortWeighting::Ppmi).unwrap();
        assert_eq!(all.ordering.len(), 3);
        assert!(matches!(s.top_contexts(1, 1, SortWeighting::Ppmi).map(|r| r.ordering), Ok(v) if v.len() == 1));

        // equal PPMI and PLMI for a and b: lower id wins
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let m = CooccurrenceMatrix::from_triples(
            2,
            ContextIndex::from_names(names),
            [(0, 0, 1), (0, 1, 1), (1, 2, 2)],
        );
        let vocab = Vocabulary::from_entries([("t-n".to_string(), 1), ("u-n".to_string(), 1)]);
        let tie = WeightedSpace::<f64>::new(vocab, ContextSpec::dep(), m, Weighting::Freq, false).unwrap();
        for sort in [SortWeighting::Ppmi, SortWeighting::Plmi] {
            assert_eq!(tie.top_contexts(0, 1, sort).unwrap().ordering, vec![0]);
        }
    }

    #[test]
    fn empty_row_rejected() {
        let s = ranked_space(&[(0, 1)]);
        // the only cell has PMI 0 in a one-row, one-column matrix
        assert!(matches!(s.top_contexts(0, 3, SortWeighting::Ppmi), Err(SpaceError::EmptyRow(0))));
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<u64>>> {
        prop::collection::vec(prop::collection::vec(0u64..6, 5), 1..6)
    }

    fn dense_space(rows: &[Vec<u64>], scale: u64, w: Weighting) -> WeightedSpace<f64> {
        let names = (0..5).map(|i| format!("c{i}")).collect();
        let triples = rows.iter().enumerate().flat_map(|(t, r)| {
            r.iter().enumerate().map(move |(c, &n)| (t as u32, c as u32, n * scale))
        });
        let m = CooccurrenceMatrix::from_triples(rows.len(), ContextIndex::from_names(names), triples);
        let vocab = Vocabulary::from_entries((0..rows.len()).map(|i| (format!("w{i}-n"), 1)));
        WeightedSpace::new(vocab, ContextSpec::dep(), m, w, false).unwrap()
    }

    proptest! {
        #[test]
        fn ppmi_scale_invariance(rows in arb_matrix()) {
            prop_assume!(rows.iter().flatten().any(|&n| n > 0));
            let a = dense_space(&rows, 1, Weighting::Ppmi);
            let b = dense_space(&rows, 2, Weighting::Ppmi);
            prop_assert_eq!(&a.cols, &b.cols);
            for (x, y) in a.values.iter().zip(&b.values) {
                prop_assert!((x - y).abs() < 1e-12);
                prop_assert!(*x > 0.0);
            }
            let pa = dense_space(&rows, 1, Weighting::Plmi);
            let pb = dense_space(&rows, 2, Weighting::Plmi);
            for (x, y) in pa.values.iter().zip(&pb.values) {
                prop_assert!((2.0 * x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn dropped_cells_are_nonpositive_pmi(rows in arb_matrix()) {
            prop_assume!(rows.iter().flatten().any(|&n| n > 0));
            let s = dense_space(&rows, 1, Weighting::Ppmi);
            let m = s.base();
            for t in 0..rows.len() as u32 {
                for c in 0..5u32 {
                    let n = m.get(t, c);
                    let kept = s.row(t).0.binary_search(&c).is_ok();
                    let pmi_pos = n > 0
                        && ((n * m.total()) as f64 / (m.row_sum(t) * m.col_sum(c)) as f64).log2() > 0.0;
                    prop_assert_eq!(kept, pmi_pos);
                }
            }
        }

        #[test]
        fn top_contexts_prefix(rows in arb_matrix(), n in 1usize..5) {
            prop_assume!(rows.iter().flatten().any(|&n| n > 0));
            let s = dense_space(&rows, 1, Weighting::Freq);
            for t in 0..rows.len() as u32 {
                for sort in [SortWeighting::Ppmi, SortWeighting::Plmi] {
                    if let (Ok(a), Ok(b)) = (s.top_contexts(t, n, sort), s.top_contexts(t, n + 1, sort)) {
                        prop_assert!(b.ordering.starts_with(&a.ordering));
                    }
                }
            }
        }
    }
}
