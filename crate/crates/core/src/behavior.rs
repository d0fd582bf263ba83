//! Argument-swap behavioral test.
//!
//! For an asymmetric relation type whose arguments share an entity type, the
//! head and tail mentions of a sentence are exchanged in the token sequence.
//! The swapped sentence expresses the reversed fact, so a model that keeps
//! predicting the original direction is relying on memorized triples.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{AnnotatedCorpus, AnnotatedSentence, Entity, Role};
use crate::error::{Error, Result};
use crate::metrics::{reverse_relation_score, Averaging, Criterion, PrfCounts, ScoreReport, Task};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapSpec {
    pub target_rtype: String,
    pub require_same_etype: bool,
}

impl SwapSpec {
    pub fn new(target_rtype: impl Into<String>) -> Self {
        SwapSpec {
            target_rtype: target_rtype.into(),
            require_same_etype: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SkipReason {
    NoTarget,
    MultipleTarget,
    TypeMismatch,
    OverlappingArguments,
    StraddlingMention,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::NoTarget => "NO_TARGET",
            SkipReason::MultipleTarget => "MULTIPLE_TARGET",
            SkipReason::TypeMismatch => "TYPE_MISMATCH",
            SkipReason::OverlappingArguments => "OVERLAPPING_ARGUMENTS",
            SkipReason::StraddlingMention => "STRADDLING_MENTION",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub sent_id: String,
    pub reason: SkipReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Eligibility {
    /// (sentence index, target relation index)
    pub eligible: Vec<(usize, usize)>,
    pub skipped: Vec<Skip>,
}

/// The five contiguous segments of a sentence around the two arguments.
struct Layout {
    first: (usize, usize),
    second: (usize, usize),
}

impl Layout {
    fn new(head: &Entity, tail: &Entity) -> Option<Self> {
        if head.overlaps(tail) || head.is_empty() || tail.is_empty() {
            return None;
        }
        let (first, second) = if head.start < tail.start { (head, tail) } else { (tail, head) };
        Some(Layout {
            first: (first.start, first.end),
            second: (second.start, second.end),
        })
    }

    fn segment_of(&self, position: usize) -> u8 {
        match position {
            p if p < self.first.0 => 0,
            p if p < self.first.1 => 1,
            p if p < self.second.0 => 2,
            p if p < self.second.1 => 3,
            _ => 4,
        }
    }

    fn fits(&self, e: &Entity) -> bool {
        e.is_empty() || self.segment_of(e.start) == self.segment_of(e.end - 1)
    }

    /// New position of token `p` once the two argument segments trade places.
    fn remap(&self, p: usize) -> usize {
        let (fs, fe) = self.first;
        let (ss, se) = self.second;
        let first_len = fe - fs;
        let second_len = se - ss;
        match self.segment_of(p) {
            1 => p + (se - fe),
            2 => p + second_len - first_len,
            3 => p - (ss - fs),
            _ => p,
        }
    }

    fn remap_entity(&self, e: &Entity) -> Entity {
        if e.is_empty() {
            let p = self.remap(e.start);
            return Entity::new(p, p, e.etype.clone());
        }
        let start = self.remap(e.start);
        Entity::new(start, start + e.len(), e.etype.clone())
    }
}

fn structural_check(s: &AnnotatedSentence, relation: usize) -> std::result::Result<Layout, SkipReason> {
    let r = &s.relations[relation];
    let (head, tail) = s.arguments(r).ok_or(SkipReason::OverlappingArguments)?;
    if r.head == r.tail {
        return Err(SkipReason::OverlappingArguments);
    }
    let layout = Layout::new(head, tail).ok_or(SkipReason::OverlappingArguments)?;
    let straddles = s
        .entities
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != r.head && i != r.tail)
        .any(|(_, e)| !layout.fits(e));
    if straddles {
        return Err(SkipReason::StraddlingMention);
    }
    Ok(layout)
}

/// Sentences with exactly one relation of the target type whose arguments
/// can be swapped without cutting through another mention.
pub fn eligible_sentences(corpus: &AnnotatedCorpus, spec: &SwapSpec) -> Eligibility {
    let mut out = Eligibility::default();
    for (si, s) in corpus.sentences.iter().enumerate() {
        let targets: Vec<usize> = s
            .relations
            .iter()
            .enumerate()
            .filter(|(_, r)| r.rtype == spec.target_rtype)
            .map(|(i, _)| i)
            .collect();
        let verdict = match targets.as_slice() {
            [] => Err(SkipReason::NoTarget),
            [only] => {
                let r = &s.relations[*only];
                match s.arguments(r) {
                    Some((h, t)) if spec.require_same_etype && h.etype != t.etype => {
                        Err(SkipReason::TypeMismatch)
                    }
                    _ => structural_check(s, *only).map(|_| *only),
                }
            }
            _ => Err(SkipReason::MultipleTarget),
        };
        match verdict {
            Ok(r) => out.eligible.push((si, r)),
            Err(reason) => out.skipped.push(Skip {
                sent_id: s.id().to_owned(),
                reason,
            }),
        }
    }
    out
}

/// Old span → new span for every entity of a swapped sentence.
pub type SpanRemap = Vec<(Entity, Entity)>;

/// Exchanges the head and tail mentions of `relation` in the token sequence.
/// Every entity is moved with its segment; the swapped relation points from
/// the mention now in first position to the one in second position.
pub fn swap_arguments(s: &AnnotatedSentence, relation: usize) -> Result<(AnnotatedSentence, SpanRemap)> {
    if relation >= s.relations.len() {
        return Err(Error::IneligibleSentence {
            sent_id: s.id().to_owned(),
            reason: format!("no relation {relation}"),
        });
    }
    let layout = structural_check(s, relation).map_err(|reason| Error::IneligibleSentence {
        sent_id: s.id().to_owned(),
        reason: reason.as_str().to_owned(),
    })?;

    let (fs, fe) = layout.first;
    let (ss, se) = layout.second;
    let tokens = s.tokens();
    let mut swapped_tokens = Vec::with_capacity(tokens.len());
    swapped_tokens.extend_from_slice(&tokens[..fs]);
    swapped_tokens.extend_from_slice(&tokens[ss..se]);
    swapped_tokens.extend_from_slice(&tokens[fe..ss]);
    swapped_tokens.extend_from_slice(&tokens[fs..fe]);
    swapped_tokens.extend_from_slice(&tokens[se..]);

    let entities: Vec<Entity> = s.entities.iter().map(|e| layout.remap_entity(e)).collect();
    let remap = s.entities.iter().cloned().zip(entities.iter().cloned()).collect();

    let mut relations = s.relations.clone();
    let target = &mut relations[relation];
    std::mem::swap(&mut target.head, &mut target.tail);

    let mut sentence = s.sentence.clone();
    sentence.tokens = swapped_tokens;
    Ok((
        AnnotatedSentence {
            sentence,
            entities,
            relations,
        },
        remap,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapResult {
    pub swapped: AnnotatedCorpus,
    pub span_remap: BTreeMap<String, SpanRemap>,
    pub skipped: Vec<Skip>,
}

/// Swaps every eligible sentence; ineligible ones are reported in `skipped`
/// and left out of the swapped corpus.
pub fn swap_corpus(corpus: &AnnotatedCorpus, spec: &SwapSpec) -> Result<SwapResult> {
    let eligibility = eligible_sentences(corpus, spec);
    let mut swapped = AnnotatedCorpus::new(Role::Gold);
    let mut span_remap = BTreeMap::new();
    for &(si, ri) in &eligibility.eligible {
        let (s, remap) = swap_arguments(&corpus.sentences[si], ri)?;
        span_remap.insert(s.id().to_owned(), remap);
        swapped.sentences.push(s);
    }
    Ok(SwapResult {
        swapped,
        span_remap,
        skipped: eligibility.skipped,
    })
}

/// NER, RE and reverse-RE scores on a swapped corpus (higher, higher, lower
/// is better).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwapScores {
    pub relation: String,
    pub ner: PrfCounts,
    pub re: PrfCounts,
    pub revre: PrfCounts,
}

pub fn evaluate_swap(swapped_gold: &AnnotatedCorpus, pred: &AnnotatedCorpus, target: &str) -> Result<SwapScores> {
    let ner = ScoreReport::build(swapped_gold, pred, Task::Ner, Averaging::Micro, None, None)?;
    let re = ScoreReport::build(
        swapped_gold,
        pred,
        Task::Re(Criterion::Strict),
        Averaging::Micro,
        None,
        Some(target),
    )?;
    let rev = reverse_relation_score(swapped_gold, pred, target)?;
    let mut revre = re.overall;
    let scores = rev.prf();
    revre.p = scores.precision;
    revre.r = scores.recall;
    revre.f1 = scores.f1;
    revre.tp = rev.tp;
    revre.fp = rev.fp;
    revre.fn_ = rev.fn_;
    revre.support = rev.support();
    Ok(SwapScores {
        relation: target.to_owned(),
        ner: ner.overall,
        re: re.overall,
        revre,
    })
}
