use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::space::SortWeighting;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Cosine,
    Lin,
    Apsyn,
    WeedsPrec,
    CosWeeds,
    ClarkeDe,
    ApInc,
    BalApInc,
    InvCl,
    Slqs,
    SlqsSub,
    SlqsRow,
    SlqsRowSub,
    Rctc,
    RevWeeds,
    RevClarkeDe,
}

impl Measure {
    pub const ALL: [Measure; 16] = [
        Measure::Cosine,
        Measure::Lin,
        Measure::Apsyn,
        Measure::WeedsPrec,
        Measure::CosWeeds,
        Measure::ClarkeDe,
        Measure::ApInc,
        Measure::BalApInc,
        Measure::InvCl,
        Measure::Slqs,
        Measure::SlqsSub,
        Measure::SlqsRow,
        Measure::SlqsRowSub,
        Measure::Rctc,
        Measure::RevWeeds,
        Measure::RevClarkeDe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Cosine => "cosine",
            Measure::Lin => "lin",
            Measure::Apsyn => "apsyn",
            Measure::WeedsPrec => "weeds_prec",
            Measure::CosWeeds => "cos_weeds",
            Measure::ClarkeDe => "clarke_de",
            Measure::ApInc => "ap_inc",
            Measure::BalApInc => "bal_ap_inc",
            Measure::InvCl => "inv_cl",
            Measure::Slqs => "slqs",
            Measure::SlqsSub => "slqs_sub",
            Measure::SlqsRow => "slqs_row",
            Measure::SlqsRowSub => "slqs_row_sub",
            Measure::Rctc => "rctc",
            Measure::RevWeeds => "rev_weeds",
            Measure::RevClarkeDe => "rev_clarke_de",
        }
    }

    /// Takes the `N` hyper-parameter.
    pub fn uses_n(self) -> bool {
        matches!(self, Measure::Apsyn | Measure::Slqs | Measure::SlqsSub | Measure::Rctc)
    }

    /// Takes the aggregate and sort-weighting hyper-parameters.
    pub fn uses_entropy_params(self) -> bool {
        matches!(self, Measure::Slqs | Measure::SlqsSub)
    }

    pub fn is_symmetric(self) -> bool {
        matches!(self, Measure::Cosine | Measure::Lin | Measure::Apsyn)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s.to_ascii_lowercase().chars().filter(|c| *c != '_' && *c != '-').collect();
        Measure::ALL
            .into_iter()
            .find(|m| m.name().replace('_', "") == norm)
            .or(match norm.as_str() {
                "cos" => Some(Measure::Cosine),
                "weeds" | "weedsprecision" => Some(Measure::WeedsPrec),
                "cde" => Some(Measure::ClarkeDe),
                "revweedsprec" => Some(Measure::RevWeeds),
                "revcde" => Some(Measure::RevClarkeDe),
                _ => None,
            })
            .ok_or_else(|| format!("unknown measure `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    Median,
    Average,
}

impl Aggregate {
    pub fn name(self) -> &'static str {
        match self {
            Aggregate::Median => "median",
            Aggregate::Average => "average",
        }
    }
}

impl FromStr for Aggregate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "median" => Ok(Aggregate::Median),
            "average" | "mean" => Ok(Aggregate::Average),
            _ => Err(format!("unknown aggregate `{s}` (expected median or average)")),
        }
    }
}

/// Which row length normalises APinc. `Hypernym` divides by the number of
/// contexts of `y` and sums ranks up to it; `Hyponym` uses `x`'s instead.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApIncNorm {
    #[default]
    Hypernym,
    Hyponym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub measure: Measure,
    #[serde(rename = "N")]
    pub n: usize,
    pub aggregate: Aggregate,
    pub sort_weighting: SortWeighting,
    #[serde(default)]
    pub ap_inc_norm: ApIncNorm,
}

impl MeasureConfig {
    pub fn new(measure: Measure) -> Self {
        MeasureConfig {
            measure,
            n: 100,
            aggregate: Aggregate::Median,
            sort_weighting: SortWeighting::Ppmi,
            ap_inc_norm: ApIncNorm::Hypernym,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_aggregate(mut self, a: Aggregate) -> Self {
        self.aggregate = a;
        self
    }

    pub fn with_sort(mut self, s: SortWeighting) -> Self {
        self.sort_weighting = s;
        self
    }

    /// `k=v` pairs for the parameters the measure actually reads, `-` when
    /// there are none.
    pub fn params(&self) -> String {
        let mut parts = Vec::new();
        if self.measure.uses_n() {
            parts.push(format!("N={}", self.n));
        }
        if self.measure.uses_entropy_params() {
            parts.push(format!("aggregate={}", self.aggregate.name()));
            parts.push(format!("sort={}", self.sort_weighting.name()));
        }
        if matches!(self.measure, Measure::ApInc | Measure::BalApInc)
            && self.ap_inc_norm == ApIncNorm::Hyponym
        {
            parts.push("norm=hyponym".into());
        }
        if parts.is_empty() {
            "-".into()
        } else {
            parts.join(",")
        }
    }

    /// Parameters other than those the measure reads are reset to defaults,
    /// so equal configurations compare equal.
    pub fn canonical(self) -> Self {
        let d = MeasureConfig::new(self.measure);
        MeasureConfig {
            measure: self.measure,
            n: if self.measure.uses_n() { self.n } else { d.n },
            aggregate: if self.measure.uses_entropy_params() { self.aggregate } else { d.aggregate },
            sort_weighting: if self.measure.uses_entropy_params() {
                self.sort_weighting
            } else {
                d.sort_weighting
            },
            ap_inc_norm: if matches!(self.measure, Measure::ApInc | Measure::BalApInc) {
                self.ap_inc_norm
            } else {
                d.ap_inc_norm
            },
        }
    }
}

impl fmt::Display for MeasureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.measure, self.params())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert_eq!("invCL".parse::<Measure>().unwrap(), Measure::InvCl);
        assert_eq!("balAPinc".parse::<Measure>().unwrap(), Measure::BalApInc);
        assert_eq!("ClarkeDE".parse::<Measure>().unwrap(), Measure::ClarkeDe);
        assert_eq!("SLQS_row_sub".parse::<Measure>().unwrap(), Measure::SlqsRowSub);
        assert!("jaccard".parse::<Measure>().is_err());
    }

    #[test]
    fn params_strings() {
        assert_eq!(MeasureConfig::new(Measure::Cosine).with_n(7).params(), "-");
        assert_eq!(MeasureConfig::new(Measure::Apsyn).with_n(500).params(), "N=500");
        let c = MeasureConfig::new(Measure::SlqsSub)
            .with_n(70)
            .with_aggregate(Aggregate::Average)
            .with_sort(SortWeighting::Plmi);
        assert_eq!(c.params(), "N=70,aggregate=average,sort=plmi");
        assert_eq!(
            MeasureConfig::new(Measure::Lin).with_n(3).canonical(),
            MeasureConfig::new(Measure::Lin)
        );
    }
}
