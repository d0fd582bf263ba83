//! Confusion counts, precision / recall / F1 and their averages.

mod matching;
mod report;

pub use matching::{
    align_corpora, match_entities, match_relations, reverse_relation_score, score_entities,
    score_relations, PredStatus, SentenceMatch, SentencePair,
};
pub use report::{partitioned_score, NoveltyCounts, PrfCounts, ScoreReport, Task};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        ConfusionCounts { tp, fp, fn_ }
    }

    /// Number of gold items.
    pub fn support(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn prf(&self) -> Prf {
        prf(*self)
    }
}

impl Add for ConfusionCounts {
    type Output = ConfusionCounts;

    fn add(self, rhs: Self) -> Self {
        ConfusionCounts::new(self.tp + rhs.tp, self.fp + rhs.fp, self.fn_ + rhs.fn_)
    }
}

impl AddAssign for ConfusionCounts {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for ConfusionCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ConfusionCounts::default(), Add::add)
    }
}

/// Confusion counts keyed by entity or relation type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelCounts(pub BTreeMap<String, ConfusionCounts>);

impl LabelCounts {
    pub fn entry(&mut self, label: &str) -> &mut ConfusionCounts {
        self.0.entry(label.to_owned()).or_default()
    }

    pub fn total(&self) -> ConfusionCounts {
        self.0.values().copied().sum()
    }

    pub fn get(&self, label: &str) -> ConfusionCounts {
        self.0.get(label).copied().unwrap_or_default()
    }

    pub fn merge(&mut self, other: &LabelCounts) {
        for (label, counts) in &other.0 {
            *self.entry(label) += *counts;
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall; zero when both are zero.
pub fn harmonic_f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Precision, recall and F1 with 0/0 taken as 0.
pub fn prf(counts: ConfusionCounts) -> Prf {
    prf_split(counts.tp, counts.fp, counts.tp, counts.fn_)
}

/// PRF where precision and recall are computed over different populations
/// (predicted items vs gold items), as in novelty-bucketed scores.
pub fn prf_split(pred_tp: usize, fp: usize, gold_tp: usize, fn_: usize) -> Prf {
    let precision = ratio(pred_tp, pred_tp + fp);
    let recall = ratio(gold_tp, gold_tp + fn_);
    Prf {
        precision,
        recall,
        f1: harmonic_f1(precision, recall),
    }
}

pub fn micro_average(counts: &LabelCounts) -> Prf {
    prf(counts.total())
}

/// Unweighted mean of per-label precision, recall and F1 over labels with
/// gold support.
pub fn macro_average(counts: &LabelCounts) -> Prf {
    let scored: Vec<Prf> = counts
        .0
        .values()
        .filter(|c| c.support() > 0)
        .map(|c| c.prf())
        .collect();
    macro_mean(&scored)
}

pub fn macro_mean(scores: &[Prf]) -> Prf {
    if scores.is_empty() {
        return Prf::default();
    }
    let n = scores.len() as f64;
    Prf {
        precision: scores.iter().map(|s| s.precision).sum::<f64>() / n,
        recall: scores.iter().map(|s| s.recall).sum::<f64>() / n,
        f1: scores.iter().map(|s| s.f1).sum::<f64>() / n,
    }
}

/// When a predicted relation counts as correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Argument boundaries and types must be correct.
    Strict,
    /// Argument boundaries must be correct; types are ignored.
    Boundaries,
    /// Each argument needs one token covered by a predicted mention of the
    /// right type.
    Relaxed,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Strict => "strict",
            Criterion::Boundaries => "boundaries",
            Criterion::Relaxed => "relaxed",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Criterion::Strict),
            "boundaries" => Ok(Criterion::Boundaries),
            "relaxed" => Ok(Criterion::Relaxed),
            _ => Err(Error::UnknownCriterion(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    #[default]
    Micro,
    Macro,
}

impl FromStr for Averaging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "micro" => Ok(Averaging::Micro),
            "macro" => Ok(Averaging::Macro),
            other => Err(Error::UnsupportedFormat(format!("averaging {other}"))),
        }
    }
}
