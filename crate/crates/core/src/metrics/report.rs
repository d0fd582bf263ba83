use std::collections::BTreeMap;

use serde::Serialize;

use super::matching::{align_corpora, match_entities, match_relations_of_type, PredStatus};
use super::{macro_average, micro_average, prf, prf_split, Averaging, ConfusionCounts, Criterion, LabelCounts, Prf};
use crate::corpus::AnnotatedCorpus;
use crate::error::Result;
use crate::overlap::{CorpusNovelty, Novelty, TrainIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Ner,
    Re(Criterion),
}

/// Scores and the counts they were computed from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PrfCounts {
    pub p: f64,
    pub r: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub support: usize,
    /// Predictions counted as correct; differs from `tp` only when recall
    /// and precision are computed over different buckets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pred_tp: Option<usize>,
}

impl PrfCounts {
    fn new(scores: Prf, counts: ConfusionCounts) -> Self {
        PrfCounts {
            p: scores.precision,
            r: scores.recall,
            f1: scores.f1,
            tp: counts.tp,
            fp: counts.fp,
            fn_: counts.fn_,
            support: counts.support(),
            pred_tp: None,
        }
    }

    pub fn prf(&self) -> Prf {
        Prf {
            precision: self.p,
            recall: self.r,
            f1: self.f1,
        }
    }
}

/// Counts for one novelty bucket. Gold items are bucketed by their own
/// novelty (recall side); predictions are bucketed a posteriori by the
/// novelty of the predicted item (precision side).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NoveltyCounts {
    pub gold_tp: usize,
    pub fn_: usize,
    pub pred_tp: usize,
    pub fp: usize,
}

impl NoveltyCounts {
    pub fn prf(&self) -> Prf {
        prf_split(self.pred_tp, self.fp, self.gold_tp, self.fn_)
    }

    fn view(&self) -> PrfCounts {
        let mut out = PrfCounts::new(self.prf(), ConfusionCounts::new(self.gold_tp, self.fp, self.fn_));
        out.pred_tp = Some(self.pred_tp);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub task: &'static str,
    /// `exact` for NER, otherwise the relation criterion.
    pub criterion: &'static str,
    pub averaging: Averaging,
    pub overall: PrfCounts,
    pub per_type: BTreeMap<String, PrfCounts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_novelty: Option<BTreeMap<Novelty, PrfCounts>>,
    #[serde(skip)]
    pub counts: LabelCounts,
    #[serde(skip)]
    pub novelty_counts: Option<BTreeMap<Novelty, NoveltyCounts>>,
}

impl ScoreReport {
    /// Scores `pred` against `gold`. When both novelty labellings are given
    /// the report also carries per-novelty scores. `only` restricts relation
    /// scoring to one relation type.
    pub fn build(
        gold: &AnnotatedCorpus,
        pred: &AnnotatedCorpus,
        task: Task,
        averaging: Averaging,
        novelty: Option<(&CorpusNovelty, &CorpusNovelty)>,
        only: Option<&str>,
    ) -> Result<Self> {
        let mut counts = LabelCounts::default();
        let mut buckets: BTreeMap<Novelty, NoveltyCounts> =
            Novelty::ALL.iter().map(|&n| (n, NoveltyCounts::default())).collect();

        for pair in align_corpora(gold, pred)? {
            let m = match task {
                Task::Ner => match_entities(pair.gold, &pair.pred)?,
                Task::Re(c) => match_relations_of_type(pair.gold, &pair.pred, c, only)?,
            };
            counts.merge(&m.counts);

            let Some((gold_nov, pred_nov)) = novelty else {
                continue;
            };
            let labels = |n: &CorpusNovelty, sentence: usize| match task {
                Task::Ner => n.entities[sentence].clone(),
                Task::Re(_) => n.relations[sentence].clone(),
            };
            let gold_labels = labels(gold_nov, pair.gold_index);
            for (g, matched) in m.gold_matched.iter().enumerate() {
                let b = buckets.get_mut(&gold_labels[m.gold_items[g]]).expect("bucket");
                match matched {
                    Some(_) => b.gold_tp += 1,
                    None => b.fn_ += 1,
                }
            }
            if let Some(pi) = pair.pred_index {
                let pred_labels = labels(pred_nov, pi);
                for (p, status) in m.pred_status.iter().enumerate() {
                    let b = buckets.get_mut(&pred_labels[m.pred_items[p]]).expect("bucket");
                    match status {
                        PredStatus::Matched(_) => b.pred_tp += 1,
                        PredStatus::Unmatched => b.fp += 1,
                        PredStatus::Duplicate => {}
                    }
                }
            }
        }

        let total = counts.total();
        let overall_scores = match averaging {
            Averaging::Micro => micro_average(&counts),
            Averaging::Macro => macro_average(&counts),
        };
        let per_type = counts
            .0
            .iter()
            .map(|(label, c)| (label.clone(), PrfCounts::new(prf(*c), *c)))
            .collect();
        let (task_name, criterion) = match task {
            Task::Ner => ("ner", "exact"),
            Task::Re(c) => ("re", c.as_str()),
        };
        Ok(ScoreReport {
            task: task_name,
            criterion,
            averaging,
            overall: PrfCounts::new(overall_scores, total),
            per_type,
            per_novelty: novelty.map(|_| buckets.iter().map(|(&n, b)| (n, b.view())).collect()),
            counts,
            novelty_counts: novelty.map(|_| buckets),
        })
    }
}

/// Scores with per-novelty buckets computed against a training index.
pub fn partitioned_score(
    gold: &AnnotatedCorpus,
    pred: &AnnotatedCorpus,
    index: &TrainIndex,
    task: Task,
    averaging: Averaging,
) -> Result<ScoreReport> {
    let gold_nov = CorpusNovelty::classify(index, gold);
    let pred_nov = CorpusNovelty::classify(index, pred);
    ScoreReport::build(gold, pred, task, averaging, Some((&gold_nov, &pred_nov)), None)
}
