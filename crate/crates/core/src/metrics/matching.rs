//! One-to-one matching of predicted and gold mentions / relations.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{ConfusionCounts, Criterion, LabelCounts};
use crate::corpus::{AnnotatedCorpus, AnnotatedSentence, Entity};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredStatus {
    /// Matched the gold item at this index.
    Matched(usize),
    Unmatched,
    /// Exact repeat of an earlier prediction; ignored.
    Duplicate,
}

/// Outcome of matching one sentence. `gold_matched[i]` holds the prediction
/// matched to gold item `i`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentenceMatch {
    /// Original indices of the gold items taking part in the match.
    pub gold_items: Vec<usize>,
    /// Original indices of the predicted items taking part in the match.
    pub pred_items: Vec<usize>,
    pub gold_matched: Vec<Option<usize>>,
    pub pred_status: Vec<PredStatus>,
    pub counts: LabelCounts,
    pub duplicates: usize,
}

impl SentenceMatch {
    fn new(gold_items: Vec<usize>, pred_items: Vec<usize>) -> Self {
        SentenceMatch {
            gold_matched: vec![None; gold_items.len()],
            pred_status: vec![PredStatus::Unmatched; pred_items.len()],
            gold_items,
            pred_items,
            ..Default::default()
        }
    }

    fn link(&mut self, gold: usize, pred: usize) {
        self.gold_matched[gold] = Some(pred);
        self.pred_status[pred] = PredStatus::Matched(gold);
    }

    fn tally<'a>(&mut self, gold_label: impl Fn(usize) -> &'a str, pred_label: impl Fn(usize) -> &'a str) {
        let mut counts = LabelCounts::default();
        for (g, m) in self.gold_matched.iter().enumerate() {
            let c = counts.entry(gold_label(g));
            match m {
                Some(_) => c.tp += 1,
                None => c.fn_ += 1,
            }
        }
        for (p, status) in self.pred_status.iter().enumerate() {
            match status {
                PredStatus::Unmatched => counts.entry(pred_label(p)).fp += 1,
                PredStatus::Duplicate => self.duplicates += 1,
                PredStatus::Matched(_) => {}
            }
        }
        if self.duplicates > 0 {
            log::warn!("collapsed {} duplicate prediction(s)", self.duplicates);
        }
        self.counts = counts;
    }
}

fn check_pair(gold: &AnnotatedSentence, pred: &AnnotatedSentence) -> Result<()> {
    if gold.id() != pred.id() {
        return Err(Error::SentenceMismatch {
            sent_id: gold.id().to_owned(),
            detail: format!("prediction is for sentence `{}`", pred.id()),
        });
    }
    if gold.tokens().len() != pred.tokens().len() {
        return Err(Error::SentenceMismatch {
            sent_id: gold.id().to_owned(),
            detail: format!(
                "gold has {} tokens, prediction has {}",
                gold.tokens().len(),
                pred.tokens().len()
            ),
        });
    }
    Ok(())
}

fn check_relation_indices(s: &AnnotatedSentence) -> Result<()> {
    for r in &s.relations {
        if s.arguments(r).is_none() {
            return Err(Error::IndexOutOfRange {
                sent_id: s.id().to_owned(),
                detail: format!("relation {} -> {} does not resolve", r.head, r.tail),
            });
        }
    }
    Ok(())
}

/// Exact-match NER: a prediction is correct when both boundaries and type
/// equal those of a gold mention.
pub fn match_entities(gold: &AnnotatedSentence, pred: &AnnotatedSentence) -> Result<SentenceMatch> {
    check_pair(gold, pred)?;
    let mut m = SentenceMatch::new((0..gold.entities.len()).collect(), (0..pred.entities.len()).collect());
    let mut pending: HashMap<&Entity, VecDeque<usize>> = HashMap::new();
    for (i, e) in gold.entities.iter().enumerate() {
        pending.entry(e).or_default().push_back(i);
    }
    let mut seen = HashSet::new();
    for (p, e) in pred.entities.iter().enumerate() {
        if !seen.insert(e) {
            m.pred_status[p] = PredStatus::Duplicate;
            continue;
        }
        if let Some(g) = pending.get_mut(e).and_then(VecDeque::pop_front) {
            m.link(g, p);
        }
    }
    m.tally(|g| &gold.entities[g].etype, |p| &pred.entities[p].etype);
    Ok(m)
}

type ArgKey<'a> = (usize, usize, Option<&'a str>);

fn relation_key<'a>(
    s: &'a AnnotatedSentence,
    r: usize,
    typed: bool,
) -> (ArgKey<'a>, ArgKey<'a>, &'a str) {
    let rel = &s.relations[r];
    let (h, t) = s.arguments(rel).expect("relation indices checked");
    let arg = |e: &'a Entity| (e.start, e.end, typed.then_some(e.etype.as_str()));
    (arg(h), arg(t), rel.rtype.as_str())
}

fn relaxed_arg_match(gold: &Entity, pred: &Entity) -> bool {
    gold.etype == pred.etype && gold.overlaps(pred)
}

fn match_relations_where(
    gold: &AnnotatedSentence,
    pred: &AnnotatedSentence,
    criterion: Criterion,
    only: Option<&str>,
) -> Result<SentenceMatch> {
    check_pair(gold, pred)?;
    check_relation_indices(gold)?;
    check_relation_indices(pred)?;
    let keep = |rtype: &str| only.is_none_or(|t| t == rtype);
    let gold_ids: Vec<usize> = (0..gold.relations.len())
        .filter(|&i| keep(&gold.relations[i].rtype))
        .collect();
    let pred_ids: Vec<usize> = (0..pred.relations.len())
        .filter(|&i| keep(&pred.relations[i].rtype))
        .collect();

    let mut m = SentenceMatch::new(gold_ids.clone(), pred_ids.clone());
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    for (p, &r) in pred_ids.iter().enumerate() {
        if seen.insert(relation_key(pred, r, true)) {
            candidates.push(p);
        } else {
            m.pred_status[p] = PredStatus::Duplicate;
        }
    }

    match criterion {
        Criterion::Strict | Criterion::Boundaries => {
            let typed = criterion == Criterion::Strict;
            let mut pending: HashMap<_, VecDeque<usize>> = HashMap::new();
            for (g, &r) in gold_ids.iter().enumerate() {
                pending.entry(relation_key(gold, r, typed)).or_default().push_back(g);
            }
            for p in candidates {
                let key = relation_key(pred, pred_ids[p], typed);
                if let Some(g) = pending.get_mut(&key).and_then(VecDeque::pop_front) {
                    m.link(g, p);
                }
            }
        }
        Criterion::Relaxed => {
            let mut order: Vec<usize> = (0..gold_ids.len()).collect();
            order.sort_by_key(|&g| {
                let (h, t) = gold.arguments(&gold.relations[gold_ids[g]]).expect("checked");
                (h.start, t.start, g)
            });
            let mut free: Vec<usize> = candidates;
            for g in order {
                let gr = &gold.relations[gold_ids[g]];
                let (gh, gt) = gold.arguments(gr).expect("checked");
                let hit = free.iter().position(|&p| {
                    let pr = &pred.relations[pred_ids[p]];
                    let (ph, pt) = pred.arguments(pr).expect("checked");
                    pr.rtype == gr.rtype && relaxed_arg_match(gh, ph) && relaxed_arg_match(gt, pt)
                });
                if let Some(pos) = hit {
                    let p = free.remove(pos);
                    m.link(g, p);
                }
            }
        }
    }
    m.tally(
        |g| &gold.relations[gold_ids[g]].rtype,
        |p| &pred.relations[pred_ids[p]].rtype,
    );
    Ok(m)
}

/// Matches relations under `criterion`. In every criterion the relation
/// type and direction must agree, and each gold relation is matched by at
/// most one prediction.
pub fn match_relations(
    gold: &AnnotatedSentence,
    pred: &AnnotatedSentence,
    criterion: Criterion,
) -> Result<SentenceMatch> {
    match_relations_where(gold, pred, criterion, None)
}

pub(crate) fn match_relations_of_type(
    gold: &AnnotatedSentence,
    pred: &AnnotatedSentence,
    criterion: Criterion,
    only: Option<&str>,
) -> Result<SentenceMatch> {
    match_relations_where(gold, pred, criterion, only)
}

/// A gold sentence with its prediction, if any.
#[derive(Debug, Clone)]
pub struct SentencePair<'a> {
    pub gold_index: usize,
    pub pred_index: Option<usize>,
    pub gold: &'a AnnotatedSentence,
    pub pred: AnnotatedSentence,
}

/// Pairs prediction sentences with gold sentences by id. Gold sentences with
/// no prediction are paired with an empty prediction; predictions for
/// unknown sentences are an error.
pub fn align_corpora<'a>(gold: &'a AnnotatedCorpus, pred: &'a AnnotatedCorpus) -> Result<Vec<SentencePair<'a>>> {
    let mut by_id: HashMap<&str, usize> = HashMap::new();
    for (i, s) in pred.sentences.iter().enumerate() {
        if by_id.insert(s.id(), i).is_some() {
            return Err(Error::DuplicateSentId(s.id().to_owned()));
        }
    }
    let gold_ids: HashSet<&str> = gold.sentences.iter().map(|s| s.id()).collect();
    if let Some(stray) = pred.sentences.iter().find(|s| !gold_ids.contains(s.id())) {
        return Err(Error::SentenceMismatch {
            sent_id: stray.id().to_owned(),
            detail: "prediction for a sentence absent from gold".into(),
        });
    }
    Ok(gold
        .sentences
        .iter()
        .enumerate()
        .map(|(gold_index, g)| {
            let pred_index = by_id.get(g.id()).copied();
            let pred = match pred_index {
                Some(i) => pred.sentences[i].clone(),
                None => AnnotatedSentence {
                    sentence: g.sentence.clone(),
                    entities: Vec::new(),
                    relations: Vec::new(),
                },
            };
            SentencePair {
                gold_index,
                pred_index,
                gold: g,
                pred,
            }
        })
        .collect())
}

pub fn score_entities(gold: &AnnotatedCorpus, pred: &AnnotatedCorpus) -> Result<LabelCounts> {
    let mut total = LabelCounts::default();
    for pair in align_corpora(gold, pred)? {
        total.merge(&match_entities(pair.gold, &pair.pred)?.counts);
    }
    Ok(total)
}

/// Relation counts over a corpus, optionally restricted to one relation type.
pub fn score_relations(
    gold: &AnnotatedCorpus,
    pred: &AnnotatedCorpus,
    criterion: Criterion,
    only: Option<&str>,
) -> Result<LabelCounts> {
    let mut total = LabelCounts::default();
    for pair in align_corpora(gold, pred)? {
        total.merge(&match_relations_where(pair.gold, &pair.pred, criterion, only)?.counts);
    }
    Ok(total)
}

/// Counts predictions that strictly match the reversal of a `target`
/// relation of the swapped gold corpus. Lower is better.
pub fn reverse_relation_score(
    swapped_gold: &AnnotatedCorpus,
    pred: &AnnotatedCorpus,
    target: &str,
) -> Result<ConfusionCounts> {
    let mut reversed = swapped_gold.clone();
    for s in &mut reversed.sentences {
        s.relations.retain(|r| r.rtype == target);
        for r in &mut s.relations {
            std::mem::swap(&mut r.head, &mut r.tail);
        }
    }
    Ok(score_relations(&reversed, pred, Criterion::Strict, Some(target))?.total())
}
