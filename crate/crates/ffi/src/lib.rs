//! C ABI for the ieval toolkit.
//!
//! Corpora and training indexes are opaque handles. Every fallible call
//! returns an [`IevalStatus`]; on failure [`ieval_last_error`] describes the
//! problem. Strings returned through `char **` out-parameters are owned by
//! the caller and must be released with [`ieval_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ieval::behavior::{evaluate_swap, swap_corpus, SwapSpec};
use ieval::corpus::{parse_conll, parse_span_json, to_span_json, ConllOptions, Scheme, Strictness};
use ieval::evaluation::{evaluate, EvaluationOptions, NoveltySource};
use ieval::metrics::{Averaging, Criterion};
use ieval::overlap::partition_corpus;
use ieval::report::{to_json, SkipReport};
use ieval::{AnnotatedCorpus, Error, NormalizationPolicy, Role, TrainIndex};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IevalStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    /// Malformed input: bad JSON, bad CoNLL columns, unknown tags.
    ParseError = 4,
    /// Well-formed input that violates a corpus invariant or does not line up
    /// with another corpus.
    ValidationError = 5,
    IoError = 6,
    Panic = 7,
}

/// An annotated corpus.
pub struct IevalCorpus {
    inner: AnnotatedCorpus,
}

/// Training-set index used for overlap classification and the baselines.
pub struct IevalIndex {
    inner: TrainIndex,
}

/// Surface normalization settings for `ieval_index_build`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct IevalPolicy {
    pub case_sensitive: bool,
    pub strip_leading_article: bool,
    pub strip_trailing_possessive: bool,
    pub type_sensitive: bool,
    /// Newline-separated stopwords replacing the default list, or NULL.
    pub stopwords: *const c_char,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(IevalStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => IevalStatus::IoError,
            Error::UnknownCriterion(_) => IevalStatus::InvalidArgument,
            Error::IndexOutOfRange { .. }
            | Error::DuplicateSentId(_)
            | Error::OverlappingSpans(..)
            | Error::SentenceMismatch { .. }
            | Error::IneligibleSentence { .. }
            | Error::EmptyEvalCorpus => IevalStatus::ValidationError,
            _ => IevalStatus::ParseError,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IevalStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IevalStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IevalStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            IevalStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(IevalStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = CString::new(s).map_err(|_| Failure(IevalStatus::InvalidArgument, "output contains NUL".into()))?;
    *out = s.into_raw();
    Ok(())
}

fn corpus(inner: AnnotatedCorpus) -> IevalCorpus {
    IevalCorpus { inner }
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ieval_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ieval_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn ieval_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
#[no_mangle]
pub extern "C" fn ieval_harmonic_f1(p: f64, r: f64) -> f64 {
    ieval::metrics::harmonic_f1(p, r)
}

/// Parses a span-JSON corpus.
#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_from_json(json: *const c_char, out: *mut *mut IevalCorpus) -> IevalStatus {
    guard(|| {
        let json = str_arg(json, "json")?;
        put(out, corpus(parse_span_json(json.as_bytes())?))
    })
}

/// Parses CoNLL text with the token in column 0 and the tag in column 1.
/// `scheme` is "iob1", "iob2" or "iobes"; `strict` rejects ill-formed tags.
#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_from_conll(
    text: *const c_char,
    scheme: *const c_char,
    strict: bool,
    out: *mut *mut IevalCorpus,
) -> IevalStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let scheme: Scheme = str_arg(scheme, "scheme")?
            .parse()
            .map_err(|e: Error| Failure(IevalStatus::InvalidArgument, e.to_string()))?;
        let options = ConllOptions {
            scheme,
            strictness: if strict { Strictness::Strict } else { Strictness::Lenient },
            ..ConllOptions::default()
        };
        put(out, corpus(parse_conll(text.as_bytes(), options)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_free(corpus: *mut IevalCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_sentence_count(corpus: *const IevalCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.inner.len())
}

#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_entity_count(corpus: *const IevalCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.inner.entity_count())
}

#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_relation_count(corpus: *const IevalCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.inner.relation_count())
}

/// Serializes a corpus as span-JSON.
#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_to_json(corpus: *const IevalCorpus, out: *mut *mut c_char) -> IevalStatus {
    guard(|| put_string(out, to_span_json(&handle(corpus, "corpus")?.inner)))
}

/// Structural problems of a corpus as a JSON array (empty when clean).
#[no_mangle]
pub unsafe extern "C" fn ieval_corpus_validate(corpus: *const IevalCorpus, out: *mut *mut c_char) -> IevalStatus {
    guard(|| {
        let violations = ieval::corpus::validate_corpus(&handle(corpus, "corpus")?.inner);
        put_string(out, to_json(&violations))
    })
}

/// Builds a training index. A NULL `policy` selects the defaults.
#[no_mangle]
pub unsafe extern "C" fn ieval_index_build(
    train: *const IevalCorpus,
    policy: *const IevalPolicy,
    out: *mut *mut IevalIndex,
) -> IevalStatus {
    guard(|| {
        let train = handle(train, "train")?;
        let policy = match policy.as_ref() {
            None => NormalizationPolicy::default(),
            Some(p) => {
                let base = NormalizationPolicy {
                    case_sensitive: p.case_sensitive,
                    strip_leading_article: p.strip_leading_article,
                    strip_trailing_possessive: p.strip_trailing_possessive,
                    type_sensitive: p.type_sensitive,
                    ..NormalizationPolicy::default()
                };
                match opt_str_arg(p.stopwords, "stopwords")? {
                    Some(text) => base.with_stopwords_text(text),
                    None => base,
                }
            }
        };
        let mut train = train.inner.clone();
        train.role = Role::Train;
        put(out, IevalIndex { inner: TrainIndex::build(&train, policy) })
    })
}

/// The default normalization policy, for callers that want to tweak it.
#[no_mangle]
pub extern "C" fn ieval_policy_default() -> IevalPolicy {
    let d = NormalizationPolicy::default();
    IevalPolicy {
        case_sensitive: d.case_sensitive,
        strip_leading_article: d.strip_leading_article,
        strip_trailing_possessive: d.strip_trailing_possessive,
        type_sensitive: d.type_sensitive,
        stopwords: ptr::null(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn ieval_index_free(index: *mut IevalIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Partition file: span-JSON with per-item novelty labels.
#[no_mangle]
pub unsafe extern "C" fn ieval_partition_json(
    index: *const IevalIndex,
    corpus: *const IevalCorpus,
    out: *mut *mut c_char,
) -> IevalStatus {
    guard(|| {
        let corpus = &handle(corpus, "corpus")?.inner;
        let part = partition_corpus(&handle(index, "index")?.inner, corpus);
        put_string(out, ieval::corpus::records_to_json(&part.novelty.to_records(corpus)))
    })
}

/// Exact / partial / new counts and proportions as JSON.
#[no_mangle]
pub unsafe extern "C" fn ieval_partition_summary_json(
    index: *const IevalIndex,
    corpus: *const IevalCorpus,
    out: *mut *mut c_char,
) -> IevalStatus {
    guard(|| {
        let part = partition_corpus(&handle(index, "index")?.inner, &handle(corpus, "corpus")?.inner);
        put_string(out, to_json(&part.summary))
    })
}

/// Scores `pred` against `gold` and writes the report as JSON.
///
/// `index` may be NULL to skip per-novelty scores. `extra_criterion` may be
/// NULL or "relaxed" (Strict and Boundaries are always reported).
#[no_mangle]
pub unsafe extern "C" fn ieval_score_json(
    gold: *const IevalCorpus,
    pred: *const IevalCorpus,
    index: *const IevalIndex,
    extra_criterion: *const c_char,
    macro_average: bool,
    out: *mut *mut c_char,
) -> IevalStatus {
    guard(|| {
        let gold = &handle(gold, "gold")?.inner;
        let pred = &handle(pred, "pred")?.inner;
        let extra: Vec<Criterion> = match opt_str_arg(extra_criterion, "extra_criterion")? {
            Some(c) => vec![c.parse()?],
            None => Vec::new(),
        };
        let options = EvaluationOptions {
            averaging: if macro_average { Averaging::Macro } else { Averaging::Micro },
            extra_criteria: extra,
            ignore_types: Vec::new(),
        };
        let novelty = match index.as_ref() {
            Some(i) => NoveltySource::Index(&i.inner),
            None => NoveltySource::None,
        };
        put_string(out, to_json(&evaluate(gold, pred, novelty, &options)?))
    })
}

/// Dataset statistics and consistency attributes as JSON.
#[no_mangle]
pub unsafe extern "C" fn ieval_stats_json(
    index: *const IevalIndex,
    train: *const IevalCorpus,
    eval: *const IevalCorpus,
    out: *mut *mut c_char,
) -> IevalStatus {
    guard(|| {
        let report = ieval::stats::stats_report(
            &handle(index, "index")?.inner,
            &handle(train, "train")?.inner,
            &handle(eval, "eval")?.inner,
        )?;
        put_string(out, to_json(&report))
    })
}

/// Retention baseline predictions. With `gold_mentions`, relations are
/// predicted over the corpus's own mentions.
#[no_mangle]
pub unsafe extern "C" fn ieval_retention(
    index: *const IevalIndex,
    corpus: *const IevalCorpus,
    gold_mentions: bool,
    out: *mut *mut IevalCorpus,
) -> IevalStatus {
    guard(|| {
        let pred = ieval::baselines::retention(&handle(index, "index")?.inner, &handle(corpus, "corpus")?.inner, gold_mentions);
        put(out, IevalCorpus { inner: pred })
    })
}

/// Head/tail-swapped corpus for `relation`. `skipped`, when not NULL,
/// receives the skip report as JSON.
#[no_mangle]
pub unsafe extern "C" fn ieval_swap(
    corpus: *const IevalCorpus,
    relation: *const c_char,
    require_same_etype: bool,
    out: *mut *mut IevalCorpus,
    skipped: *mut *mut c_char,
) -> IevalStatus {
    guard(|| {
        let relation = str_arg(relation, "relation")?;
        if relation.is_empty() {
            return Err(Failure(IevalStatus::InvalidArgument, "relation is empty".into()));
        }
        let mut spec = SwapSpec::new(relation);
        spec.require_same_etype = require_same_etype;
        let result = swap_corpus(&handle(corpus, "corpus")?.inner, &spec)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !skipped.is_null() {
            put_string(skipped, to_json(&SkipReport(result.skipped)))?;
        }
        put(out, IevalCorpus { inner: result.swapped })
    })
}

/// NER, RE and revRE scores of predictions on a swapped corpus, as JSON.
#[no_mangle]
pub unsafe extern "C" fn ieval_swap_eval_json(
    swapped_gold: *const IevalCorpus,
    pred: *const IevalCorpus,
    relation: *const c_char,
    out: *mut *mut c_char,
) -> IevalStatus {
    guard(|| {
        let scores = evaluate_swap(
            &handle(swapped_gold, "swapped_gold")?.inner,
            &handle(pred, "pred")?.inner,
            str_arg(relation, "relation")?,
        )?;
        put_string(out, to_json(&scores))
    })
}
