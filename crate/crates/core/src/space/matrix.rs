use std::collections::HashMap;

use crate::corpus::CoocEvent;
use crate::Scalar;

use super::SpaceError;

/// Bidirectional map between context strings and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContextIndex {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl ContextIndex {
    /// Panics on duplicate names.
    pub fn from_names(names: Vec<String>) -> Self {
        let mut ids = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let prev = ids.insert(n.clone(), i as u32);
            assert!(prev.is_none(), "duplicate context `{n}`");
        }
        ContextIndex { names, ids }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Sparse target x context count matrix in CSR layout. Rows are indexed by
/// vocabulary id and columns by context id; zero cells are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooccurrenceMatrix {
    pub(crate) row_ptr: Vec<usize>,
    pub(crate) cols: Vec<u32>,
    pub(crate) counts: Vec<u64>,
    pub(crate) contexts: ContextIndex,
    pub(crate) row_sums: Vec<u64>,
    pub(crate) col_sums: Vec<u64>,
    pub(crate) total: u64,
}

impl CooccurrenceMatrix {
    /// Build from `(row, col, count)` triples. Duplicate cells are summed and
    /// zero counts ignored.
    pub fn from_triples<I>(n_rows: usize, contexts: ContextIndex, triples: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, u64)>,
    {
        let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n_rows];
        for (r, c, n) in triples {
            assert!((c as usize) < contexts.len(), "context id {c} out of range");
            if n > 0 {
                rows[r as usize].push((c, n));
            }
        }
        let mut m = CooccurrenceMatrix {
            row_ptr: Vec::with_capacity(n_rows + 1),
            contexts,
            ..Default::default()
        };
        m.row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(c, _)| c);
            let mut last: Option<u32> = None;
            for (c, n) in row {
                if last == Some(c) {
                    *m.counts.last_mut().unwrap() += n;
                } else {
                    m.cols.push(c);
                    m.counts.push(n);
                    last = Some(c);
                }
            }
            m.row_ptr.push(m.cols.len());
        }
        m.recompute_marginals();
        m
    }

    pub(crate) fn recompute_marginals(&mut self) {
        let n_rows = self.n_rows();
        self.row_sums = (0..n_rows).map(|r| self.row(r as u32).1.iter().sum()).collect();
        self.col_sums = vec![0; self.contexts.len()];
        for (&c, &n) in self.cols.iter().zip(&self.counts) {
            self.col_sums[c as usize] += n;
        }
        self.total = self.row_sums.iter().sum();
    }

    pub fn n_rows(&self) -> usize {
        self.row_ptr.len().saturating_sub(1)
    }

    pub fn n_cols(&self) -> usize {
        self.contexts.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn contexts(&self) -> &ContextIndex {
        &self.contexts
    }

    /// Context ids (ascending) and counts of row `t`.
    pub fn row(&self, t: u32) -> (&[u32], &[u64]) {
        let (a, b) = (self.row_ptr[t as usize], self.row_ptr[t as usize + 1]);
        (&self.cols[a..b], &self.counts[a..b])
    }

    pub fn get(&self, t: u32, c: u32) -> u64 {
        let (cols, counts) = self.row(t);
        cols.binary_search(&c).map(|i| counts[i]).unwrap_or(0)
    }

    pub fn row_sum(&self, t: u32) -> u64 {
        self.row_sums[t as usize]
    }

    pub fn col_sum(&self, c: u32) -> u64 {
        self.col_sums[c as usize]
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[u64] {
        &self.col_sums
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Entropy in bits of `p(w|c)` for one context column.
    pub fn context_entropy<F: Scalar>(&self, c: u32, normalize: bool) -> Result<F, SpaceError> {
        if c as usize >= self.n_cols() || self.col_sums[c as usize] == 0 {
            return Err(SpaceError::UnknownContext(c));
        }
        let sum = self.col_sums[c as usize];
        let mut support = 0;
        let mut h = F::zero();
        for t in 0..self.n_rows() as u32 {
            let n = self.get(t, c);
            if n > 0 {
                support += 1;
                h += entropy_term::<F>(n, sum);
            }
        }
        Ok(finish_entropy(h, support, normalize))
    }

    /// Entropies of every column in one pass. Columns without counts get 0.
    pub fn context_entropies<F: Scalar>(&self, normalize: bool) -> Vec<F> {
        let mut h = vec![F::zero(); self.n_cols()];
        let mut support = vec![0usize; self.n_cols()];
        for (&c, &n) in self.cols.iter().zip(&self.counts) {
            let c = c as usize;
            h[c] += entropy_term::<F>(n, self.col_sums[c]);
            support[c] += 1;
        }
        h.into_iter()
            .zip(support)
            .map(|(h, s)| finish_entropy(h, s, normalize))
            .collect()
    }

    /// Entropy in bits of `p(c|t)` for one target row.
    pub fn row_entropy<F: Scalar>(&self, t: u32, normalize: bool) -> Result<F, SpaceError> {
        if t as usize >= self.n_rows() || self.row_sums[t as usize] == 0 {
            return Err(SpaceError::EmptyRow(t));
        }
        let sum = self.row_sums[t as usize];
        let (_, counts) = self.row(t);
        let h = counts.iter().map(|&n| entropy_term::<F>(n, sum)).sum();
        Ok(finish_entropy(h, counts.len(), normalize))
    }
}

fn entropy_term<F: Scalar>(n: u64, sum: u64) -> F {
    let p = F::from_count(n) / F::from_count(sum);
    -p * p.log2()
}

fn finish_entropy<F: Scalar>(h: F, support: usize, normalize: bool) -> F {
    // clamp the -0.0 produced by a single-outcome distribution
    let h = h.max(F::zero());
    if !normalize {
        return h;
    }
    if support <= 1 {
        F::zero()
    } else {
        h / F::from_usize_lossy(support).log2()
    }
}

/// Mergeable co-occurrence counter. Contexts are interned locally and
/// renumbered in lexicographic order by [`CountAccumulator::finish`], so the
/// result does not depend on event order or on how shards were merged.
#[derive(Debug, Clone, Default)]
pub struct CountAccumulator {
    ctx_ids: HashMap<String, u32>,
    ctx_names: Vec<String>,
    cells: HashMap<(u32, u32), u64>,
}

impl CountAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, ctx: &str) -> u32 {
        if let Some(&id) = self.ctx_ids.get(ctx) {
            return id;
        }
        let id = self.ctx_names.len() as u32;
        self.ctx_ids.insert(ctx.to_owned(), id);
        self.ctx_names.push(ctx.to_owned());
        id
    }

    pub fn add(&mut self, target: u32, ctx: &str) {
        self.add_n(target, ctx, 1);
    }

    pub fn add_n(&mut self, target: u32, ctx: &str, n: u64) {
        let c = self.intern(ctx);
        *self.cells.entry((target, c)).or_default() += n;
    }

    pub fn add_event(&mut self, event: &CoocEvent) {
        self.add(event.target, &event.context);
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn merge(mut self, other: CountAccumulator) -> CountAccumulator {
        if other.cells.len() > self.cells.len() {
            return other.merge(self);
        }
        let remap: Vec<u32> = other.ctx_names.iter().map(|n| self.intern(n)).collect();
        for ((t, c), n) in other.cells {
            *self.cells.entry((t, remap[c as usize])).or_default() += n;
        }
        self
    }

    /// Freeze into a matrix with `n_rows` rows.
    pub fn finish(self, n_rows: usize) -> CooccurrenceMatrix {
        let mut order: Vec<u32> = (0..self.ctx_names.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| self.ctx_names[a as usize].cmp(&self.ctx_names[b as usize]));
        let mut new_id = vec![0u32; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old as usize] = new as u32;
        }
        let mut names = self.ctx_names;
        let mut sorted_names = Vec::with_capacity(names.len());
        for &old in &order {
            sorted_names.push(std::mem::take(&mut names[old as usize]));
        }
        let index = ContextIndex::from_names(sorted_names);
        CooccurrenceMatrix::from_triples(
            n_rows,
            index,
            self.cells.into_iter().map(|((t, c), n)| (t, new_id[c as usize], n)),
        )
    }
}

/// Accumulate a stream of events into a matrix with `n_rows` rows.
pub fn accumulate<I>(n_rows: usize, events: I) -> CooccurrenceMatrix
where
    I: IntoIterator<Item = CoocEvent>,
{
    let mut acc = CountAccumulator::new();
    for e in events {
        acc.add_event(&e);
    }
    acc.finish(n_rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(t: u32, c: &str) -> CoocEvent {
        CoocEvent { target: t, context: c.to_string() }
    }

    #[test]
    fn direct_counting() {
        let m = accumulate(2, vec![ev(0, "a"), ev(0, "a"), ev(0, "b"), ev(1, "b")]);
        let a = m.contexts().id("a").unwrap();
        let b = m.contexts().id("b").unwrap();
        assert_eq!(m.get(0, a), 2);
        assert_eq!(m.get(0, b), 1);
        assert_eq!(m.get(1, b), 1);
        assert_eq!(m.get(1, a), 0);
        assert_eq!(m.total(), 4);
        assert_eq!(m.row_sums(), &[3, 1]);
        assert_eq!(m.col_sums(), &[2, 2]);
    }

    #[test]
    fn empty_stream() {
        let m = accumulate(3, Vec::new());
        assert_eq!(m.total(), 0);
        assert_eq!(m.nnz(), 0);
        assert_eq!(m.n_rows(), 3);
    }

    fn column(counts: &[u64]) -> CooccurrenceMatrix {
        let idx = ContextIndex::from_names(vec!["c".into()]);
        CooccurrenceMatrix::from_triples(
            counts.len(),
            idx,
            counts.iter().enumerate().map(|(i, &n)| (i as u32, 0, n)),
        )
    }

    #[test]
    fn context_entropy_examples() {
        let h: f64 = column(&[1, 1]).context_entropy(0, false).unwrap();
        assert!((h - 1.0).abs() < 1e-15);
        let h: f64 = column(&[4]).context_entropy(0, false).unwrap();
        assert_eq!(h, 0.0);
        let h: f64 = column(&[3, 1]).context_entropy(0, false).unwrap();
        assert!((h - 0.811_278_124_459_132_8).abs() < 1e-12);
        let all: Vec<f64> = column(&[3, 1]).context_entropies(false);
        assert_eq!(all[0], h);
        assert!(matches!(
            column(&[3, 1]).context_entropy::<f64>(1, false),
            Err(SpaceError::UnknownContext(1))
        ));
    }

    #[test]
    fn row_entropy_examples() {
        let idx = ContextIndex::from_names(vec!["a".into(), "b".into(), "c".into()]);
        let m = CooccurrenceMatrix::from_triples(
            4,
            idx,
            [(0, 0, 2), (0, 1, 2), (1, 0, 5), (2, 0, 2), (2, 1, 1), (2, 2, 1)],
        );
        assert_eq!(m.row_entropy::<f64>(0, false).unwrap(), 1.0);
        assert_eq!(m.row_entropy::<f64>(1, false).unwrap(), 0.0);
        assert!((m.row_entropy::<f64>(2, false).unwrap() - 1.5).abs() < 1e-15);
        assert!((m.row_entropy::<f64>(2, true).unwrap() - 1.5 / 3f64.log2()).abs() < 1e-15);
        assert!(matches!(m.row_entropy::<f64>(3, false), Err(SpaceError::EmptyRow(3))));
    }

    fn arb_events() -> impl Strategy<Value = Vec<(u32, u8)>> {
        prop::collection::vec((0u32..6, 0u8..8), 0..80)
    }

    proptest! {
        #[test]
        fn sharded_merge_matches_single_pass(events in arb_events(), cut in 0usize..80, cut2 in 0usize..80) {
            let events: Vec<CoocEvent> =
                events.iter().map(|&(t, c)| ev(t, &format!("c{c}"))).collect();
            let single = accumulate(6, events.clone());
            let a = cut.min(events.len());
            let b = cut2.min(events.len()).max(a);
            let mut shards: Vec<CountAccumulator> = Vec::new();
            for part in [&events[..a], &events[a..b], &events[b..]] {
                let mut acc = CountAccumulator::new();
                part.iter().for_each(|e| acc.add_event(e));
                shards.push(acc);
            }
            let mut it = shards.into_iter().rev();
            let first = it.next().unwrap();
            let merged = it.fold(first, |acc, s| s.merge(acc)).finish(6);
            prop_assert_eq!(&merged, &single);
            prop_assert_eq!(single.total(), single.row_sums().iter().sum::<u64>());
            prop_assert_eq!(single.total(), single.col_sums().iter().sum::<u64>());
            prop_assert_eq!(single.total(), events.len() as u64);
        }

        #[test]
        fn entropy_bounds(counts in prop::collection::vec(1u64..20, 1..8)) {
            let m = column(&counts);
            let h: f64 = m.context_entropy(0, false).unwrap();
            prop_assert!(h >= 0.0);
            prop_assert!(h <= (counts.len() as f64).log2() + 1e-12);
            let hn: f64 = m.context_entropy(0, true).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&hn));
        }
    }
}
