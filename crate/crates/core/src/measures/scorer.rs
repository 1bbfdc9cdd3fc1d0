use std::collections::HashSet;
use std::sync::OnceLock;

use crate::corpus::context_words;
use crate::space::{SortWeighting, SpaceError, WeightedSpace, WordPmiTable};
use crate::Scalar;

use super::config::{Aggregate, ApIncNorm, Measure, MeasureConfig};
use super::{MeasureError, ScoredPair};

/// Scores `(x, y)` pairs over one space.
///
/// Per-target rankings are computed on first use and memoised in
/// [`OnceLock`]s, so a `Scorer` can be shared across threads.
pub struct Scorer<'a, F> {
    space: &'a WeightedSpace<F>,
    aux: Option<&'a WordPmiTable<F>>,
    ranked: Vec<OnceLock<Vec<u32>>>,
    sorted_ppmi: Vec<OnceLock<Option<Vec<u32>>>>,
    sorted_plmi: Vec<OnceLock<Option<Vec<u32>>>>,
}

impl<'a, F: Scalar> Scorer<'a, F> {
    pub fn new(space: &'a WeightedSpace<F>) -> Self {
        let n = space.n_targets();
        Scorer {
            space,
            aux: None,
            ranked: (0..n).map(|_| OnceLock::new()).collect(),
            sorted_ppmi: (0..n).map(|_| OnceLock::new()).collect(),
            sorted_plmi: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn with_aux(mut self, aux: &'a WordPmiTable<F>) -> Self {
        self.aux = Some(aux);
        self
    }

    pub fn space(&self) -> &WeightedSpace<F> {
        self.space
    }

    fn row(&self, t: u32) -> Result<(&[u32], &[F]), MeasureError> {
        if t as usize >= self.space.n_targets() {
            return Err(MeasureError::EmptyRow(format!("#{t}")));
        }
        let row = self.space.row(t);
        if row.0.is_empty() {
            return Err(MeasureError::EmptyRow(self.space.vocabulary().key(t).to_owned()));
        }
        Ok(row)
    }

    /// Context ids of `t` ranked by the space's weighting.
    fn ranking(&self, t: u32) -> &[u32] {
        self.ranked[t as usize].get_or_init(|| self.space.ranked(t).ordering)
    }

    fn sorted(&self, t: u32, sort: SortWeighting) -> Result<&[u32], MeasureError> {
        let cell = match sort {
            SortWeighting::Ppmi => &self.sorted_ppmi[t as usize],
            SortWeighting::Plmi => &self.sorted_plmi[t as usize],
        };
        cell.get_or_init(|| {
            self.space
                .top_contexts(t, usize::MAX, sort)
                .ok()
                .map(|r| r.ordering)
        })
        .as_deref()
        .ok_or_else(|| MeasureError::EmptyRow(self.space.vocabulary().key(t).to_owned()))
    }

    /// Score a pair given as lemma-POS keys; out-of-vocabulary words and
    /// measure errors yield an undefined score with a reason.
    pub fn score_pair(&self, x: &str, y: &str, cfg: &MeasureConfig) -> ScoredPair<F> {
        let res = match (self.space.target_id(x), self.space.target_id(y)) {
            (Some(xi), Some(yi)) => self.score(xi, yi, cfg),
            (None, _) => Err(MeasureError::Oov(x.to_owned())),
            (_, None) => Err(MeasureError::Oov(y.to_owned())),
        };
        ScoredPair::from_result(x, y, res)
    }

    pub fn score(&self, x: u32, y: u32, cfg: &MeasureConfig) -> Result<F, MeasureError> {
        if cfg.measure.uses_n() && cfg.n == 0 {
            return Err(MeasureError::InvalidConfig("N must be at least 1".into()));
        }
        match cfg.measure {
            Measure::Cosine => self.cosine(x, y),
            Measure::Lin => self.lin(x, y),
            Measure::Apsyn => self.apsyn(x, y, cfg.n),
            Measure::WeedsPrec => self.weeds_prec(x, y),
            Measure::CosWeeds => self.cos_weeds(x, y),
            Measure::ClarkeDe => self.clarke_de(x, y),
            Measure::ApInc => self.ap_inc(x, y, cfg.ap_inc_norm),
            Measure::BalApInc => self.bal_ap_inc(x, y, cfg.ap_inc_norm),
            Measure::InvCl => self.inv_cl(x, y),
            Measure::Slqs => self.slqs(x, y, cfg.n, cfg.aggregate, cfg.sort_weighting),
            Measure::SlqsSub => self.slqs_sub(x, y, cfg.n, cfg.aggregate, cfg.sort_weighting),
            Measure::SlqsRow => self.slqs_row(x, y),
            Measure::SlqsRowSub => self.slqs_row_sub(x, y),
            Measure::Rctc => self.rctc(x, y, cfg.n),
            Measure::RevWeeds => self.rev_weeds(x, y),
            Measure::RevClarkeDe => self.rev_clarke_de(x, y),
        }
    }

    /// Calls `f(vx[c], vy[c])` for every context shared by both rows, in
    /// ascending context id order.
    fn for_shared(&self, x: u32, y: u32, mut f: impl FnMut(u32, F, F)) -> Result<(), MeasureError> {
        let (xc, xv) = self.row(x)?;
        let (yc, yv) = self.row(y)?;
        let (mut i, mut j) = (0, 0);
        while i < xc.len() && j < yc.len() {
            match xc[i].cmp(&yc[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    f(xc[i], xv[i], yv[j]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(())
    }

    fn row_sum(&self, t: u32) -> Result<F, MeasureError> {
        Ok(self.row(t)?.1.iter().copied().sum())
    }

    pub fn cosine(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        let mut dot = F::zero();
        self.for_shared(x, y, |_, a, b| dot += a * b)?;
        let nx: F = self.row(x)?.1.iter().map(|&v| v * v).sum();
        let ny: F = self.row(y)?.1.iter().map(|&v| v * v).sum();
        Ok((dot / (nx * ny).sqrt()).min(F::one()))
    }

    pub fn lin(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        let mut shared = F::zero();
        self.for_shared(x, y, |_, a, b| shared += a + b)?;
        Ok(shared / (self.row_sum(x)? + self.row_sum(y)?))
    }

    pub fn apsyn(&self, x: u32, y: u32, n: usize) -> Result<F, MeasureError> {
        self.row(x)?;
        self.row(y)?;
        let top_x = &self.ranking(x)[..n.min(self.ranking(x).len())];
        let top_y = &self.ranking(y)[..n.min(self.ranking(y).len())];
        // (context, rank) sorted by context so the sum order is symmetric
        let by_ctx = |top: &[u32]| {
            let mut v: Vec<(u32, usize)> = top.iter().enumerate().map(|(r, &c)| (c, r + 1)).collect();
            v.sort_unstable();
            v
        };
        let (rx, ry) = (by_ctx(top_x), by_ctx(top_y));
        let two = F::one() + F::one();
        let (mut i, mut j, mut sum) = (0, 0, F::zero());
        while i < rx.len() && j < ry.len() {
            match rx[i].0.cmp(&ry[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += two / F::from_usize_lossy(rx[i].1 + ry[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(sum)
    }

    pub fn weeds_prec(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        let mut shared = F::zero();
        self.for_shared(x, y, |_, a, _| shared += a)?;
        Ok(shared / self.row_sum(x)?)
    }

    pub fn cos_weeds(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        Ok((self.cosine(x, y)? * self.weeds_prec(x, y)?).sqrt())
    }

    pub fn clarke_de(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        let mut shared = F::zero();
        self.for_shared(x, y, |_, a, b| shared += a.min(b))?;
        Ok(shared / self.row_sum(x)?)
    }

    pub fn ap_inc(&self, x: u32, y: u32, norm: ApIncNorm) -> Result<F, MeasureError> {
        self.row(x)?;
        let (y_cols, _) = self.row(y)?;
        let ny = y_cols.len();
        // rank of each of y's contexts, aligned with y's column order
        let mut y_rank = vec![0usize; ny];
        for (r, &c) in self.ranking(y).iter().enumerate() {
            y_rank[y_cols.binary_search(&c).expect("ranked context in row")] = r + 1;
        }
        let x_ranked = self.ranking(x);
        let (limit, denom) = match norm {
            ApIncNorm::Hypernym => (ny.min(x_ranked.len()), ny),
            ApIncNorm::Hyponym => (x_ranked.len(), x_ranked.len()),
        };
        let ny_plus_one = F::from_usize_lossy(ny + 1);
        let mut hits = 0usize;
        let mut sum = F::zero();
        for (r, &c) in x_ranked.iter().take(limit).enumerate() {
            if let Ok(pos) = y_cols.binary_search(&c) {
                hits += 1;
                let precision = F::from_usize_lossy(hits) / F::from_usize_lossy(r + 1);
                let rel = F::one() - F::from_usize_lossy(y_rank[pos]) / ny_plus_one;
                sum += precision * rel;
            }
        }
        Ok(sum / F::from_usize_lossy(denom))
    }

    pub fn bal_ap_inc(&self, x: u32, y: u32, norm: ApIncNorm) -> Result<F, MeasureError> {
        Ok((self.lin(x, y)? * self.ap_inc(x, y, norm)?).sqrt())
    }

    pub fn inv_cl(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        let forward = self.clarke_de(x, y)?;
        let backward = self.clarke_de(y, x)?;
        Ok((forward * (F::one() - backward).max(F::zero())).sqrt())
    }

    /// Median or mean entropy of the top `n` contexts of `t`.
    pub fn generality(&self, t: u32, n: usize, agg: Aggregate, sort: SortWeighting) -> Result<F, MeasureError> {
        self.row(t)?;
        let top = self.sorted(t, sort)?;
        let mut h: Vec<F> = top[..n.min(top.len())]
            .iter()
            .map(|&c| self.space.context_entropy(c))
            .collect::<Result<_, SpaceError>>()?;
        Ok(aggregate(&mut h, agg))
    }

    pub fn slqs(&self, x: u32, y: u32, n: usize, agg: Aggregate, sort: SortWeighting) -> Result<F, MeasureError> {
        let ex = self.generality(x, n, agg, sort)?;
        let ey = self.generality(y, n, agg, sort)?;
        if ey == F::zero() {
            return Err(MeasureError::DegenerateEntropy);
        }
        Ok(F::one() - ex / ey)
    }

    pub fn slqs_sub(&self, x: u32, y: u32, n: usize, agg: Aggregate, sort: SortWeighting) -> Result<F, MeasureError> {
        Ok(self.generality(y, n, agg, sort)? - self.generality(x, n, agg, sort)?)
    }

    fn target_entropy(&self, t: u32) -> Result<F, MeasureError> {
        self.row(t)?;
        Ok(self.space.row_entropy(t)?)
    }

    pub fn slqs_row(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        let hx = self.target_entropy(x)?;
        let hy = self.target_entropy(y)?;
        if hy == F::zero() {
            return Err(MeasureError::DegenerateEntropy);
        }
        Ok(F::one() - hx / hy)
    }

    pub fn slqs_row_sub(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        Ok(self.target_entropy(y)? - self.target_entropy(x)?)
    }

    /// Distinct words of the top `n` contexts of `t`, optionally only those
    /// contexts absent from `exclude`'s row.
    fn topic(&self, t: u32, n: usize, exclude: Option<u32>) -> Vec<&str> {
        let spec = self.space.context_spec();
        let ctx = self.space.contexts();
        let excluded = exclude.map(|u| self.space.row(u).0);
        let mut seen = HashSet::new();
        let mut words = Vec::new();
        for &c in self.ranking(t).iter().take(n) {
            if excluded.is_some_and(|ex| ex.binary_search(&c).is_ok()) {
                continue;
            }
            for w in context_words(spec, ctx.name(c)) {
                if seen.insert(w) {
                    words.push(w);
                }
            }
        }
        words
    }

    /// Median pairwise PMI, `None` for fewer than two words.
    fn coherence(aux: &WordPmiTable<F>, words: &[&str]) -> Option<F> {
        if words.len() < 2 {
            return None;
        }
        let mut pmis = Vec::with_capacity(words.len() * (words.len() - 1) / 2);
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                pmis.push(aux.pmi(lo, hi));
            }
        }
        Some(aggregate(&mut pmis, Aggregate::Median))
    }

    /// `TC(all) / TC(rest)`, or 1 when either side is undefined or zero.
    fn coherence_ratio(aux: &WordPmiTable<F>, all: &[&str], rest: &[&str]) -> F {
        match (Self::coherence(aux, all), Self::coherence(aux, rest)) {
            (Some(a), Some(r)) if a > F::zero() && r > F::zero() => a / r,
            _ => F::one(),
        }
    }

    pub fn rctc(&self, x: u32, y: u32, n: usize) -> Result<F, MeasureError> {
        let aux = self.aux.ok_or(MeasureError::MissingAuxiliary)?;
        self.row(x)?;
        self.row(y)?;
        let rx = Self::coherence_ratio(aux, &self.topic(x, n, None), &self.topic(x, n, Some(y)));
        let ry = Self::coherence_ratio(aux, &self.topic(y, n, None), &self.topic(y, n, Some(x)));
        Ok(rx / ry)
    }

    pub fn rev_weeds(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        self.weeds_prec(y, x)
    }

    pub fn rev_clarke_de(&self, x: u32, y: u32) -> Result<F, MeasureError> {
        self.clarke_de(y, x)
    }
}

/// Median (mean of the middle two for even length) or mean; 0 when empty.
pub(crate) fn aggregate<F: Scalar>(values: &mut [F], agg: Aggregate) -> F {
    if values.is_empty() {
        return F::zero();
    }
    match agg {
        Aggregate::Average => {
            values.iter().copied().sum::<F>() / F::from_usize_lossy(values.len())
        }
        Aggregate::Median => {
            values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            let m = values.len() / 2;
            if values.len() % 2 == 1 {
                values[m]
            } else {
                (values[m - 1] + values[m]) / (F::one() + F::one())
            }
        }
    }
}
