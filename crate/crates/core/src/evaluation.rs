//! End-to-end scoring of a prediction corpus: NER plus relation extraction
//! under Strict and Boundaries (and Relaxed when asked for).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::AnnotatedCorpus;
use crate::error::Result;
use crate::metrics::{Averaging, Criterion, ScoreReport, Task};
use crate::overlap::{CorpusNovelty, TrainIndex};

/// Where per-novelty buckets come from.
#[derive(Debug, Clone, Copy)]
pub enum NoveltySource<'a> {
    None,
    Index(&'a TrainIndex),
    Precomputed {
        gold: &'a CorpusNovelty,
        pred: &'a CorpusNovelty,
    },
}

#[derive(Debug, Clone, Default)]
pub struct EvaluationOptions {
    pub averaging: Averaging,
    /// Criteria reported on top of Strict and Boundaries.
    pub extra_criteria: Vec<Criterion>,
    /// Entity types removed from both corpora before scoring, together with
    /// the relations attached to them.
    pub ignore_types: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub ner: ScoreReport,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub re: BTreeMap<Criterion, ScoreReport>,
}

/// Removes entities whose type is in `types`, and relations that touch them,
/// keeping any novelty labels aligned with what remains.
pub fn drop_entity_types(
    corpus: &AnnotatedCorpus,
    novelty: Option<&CorpusNovelty>,
    types: &[String],
) -> (AnnotatedCorpus, Option<CorpusNovelty>) {
    if types.is_empty() {
        return (corpus.clone(), novelty.cloned());
    }
    let mut out = corpus.clone();
    let mut out_nov = novelty.map(|_| CorpusNovelty::default());
    for (si, s) in out.sentences.iter_mut().enumerate() {
        let mut remap = vec![None; s.entities.len()];
        let mut kept_e = Vec::new();
        for (i, e) in s.entities.iter().enumerate() {
            if !types.contains(&e.etype) {
                remap[i] = Some(kept_e.len());
                kept_e.push(i);
            }
        }
        let mut kept_r = Vec::new();
        let mut relations = Vec::new();
        for (i, r) in s.relations.iter().enumerate() {
            let head = remap.get(r.head).copied().flatten();
            let tail = remap.get(r.tail).copied().flatten();
            if let (Some(head), Some(tail)) = (head, tail) {
                let mut r = r.clone();
                r.head = head;
                r.tail = tail;
                relations.push(r);
                kept_r.push(i);
            }
        }
        s.entities = kept_e.iter().map(|&i| s.entities[i].clone()).collect();
        s.relations = relations;
        if let (Some(src), Some(dst)) = (novelty, out_nov.as_mut()) {
            dst.entities.push(kept_e.iter().map(|&i| src.entities[si][i]).collect());
            dst.relations.push(kept_r.iter().map(|&i| src.relations[si][i]).collect());
        }
    }
    (out, out_nov)
}

pub fn evaluate(
    gold: &AnnotatedCorpus,
    pred: &AnnotatedCorpus,
    novelty: NoveltySource<'_>,
    options: &EvaluationOptions,
) -> Result<Evaluation> {
    let (computed_gold, computed_pred);
    let (gold_nov, pred_nov) = match novelty {
        NoveltySource::None => (None, None),
        NoveltySource::Index(index) => {
            computed_gold = CorpusNovelty::classify(index, gold);
            computed_pred = CorpusNovelty::classify(index, pred);
            (Some(&computed_gold), Some(&computed_pred))
        }
        NoveltySource::Precomputed { gold, pred } => (Some(gold), Some(pred)),
    };
    let (gold, gold_nov) = drop_entity_types(gold, gold_nov, &options.ignore_types);
    let (pred, pred_nov) = drop_entity_types(pred, pred_nov, &options.ignore_types);
    let buckets = gold_nov.as_ref().zip(pred_nov.as_ref());

    let ner = ScoreReport::build(&gold, &pred, Task::Ner, options.averaging, buckets, None)?;
    let mut re = BTreeMap::new();
    if gold.relation_count() > 0 || pred.relation_count() > 0 {
        let mut criteria = vec![Criterion::Strict, Criterion::Boundaries];
        criteria.extend(options.extra_criteria.iter().copied());
        for c in criteria {
            if let std::collections::btree_map::Entry::Vacant(slot) = re.entry(c) {
                slot.insert(ScoreReport::build(&gold, &pred, Task::Re(c), options.averaging, buckets, None)?);
            }
        }
    }
    Ok(Evaluation { ner, re })
}
