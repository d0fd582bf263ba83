//! Seeded corpus generators and brute-force reference implementations shared
//! by the integration and acceptance suites.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;

use ieval::{AnnotatedCorpus, AnnotatedSentence, Criterion, Entity, Novelty, Relation, Role, Sentence};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ETYPES: [&str; 3] = ["LOC", "ORG", "PER"];
pub const RTYPES: [&str; 3] = ["Kill", "LiveIn", "WorkFor"];
const FILLERS: [&str; 8] = ["the", "of", "and", "said", "in", "to", "a", "."];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> AnnotatedCorpus {
    let role = if name.starts_with("train") { Role::Train } else { Role::Gold };
    ieval::corpus::read_span_json_file(fixture_dir().join(name), role).expect("fixture parses")
}

fn sentence(id: String, tokens: Vec<String>, entities: Vec<Entity>, relations: Vec<Relation>) -> AnnotatedSentence {
    AnnotatedSentence {
        sentence: Sentence {
            doc_id: String::new(),
            sent_id: id,
            tokens,
        },
        entities,
        relations,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    /// Number of distinct content words.
    pub vocab: usize,
    pub max_len: usize,
    pub max_mention_len: usize,
    /// Allow nested or overlapping mentions.
    pub overlapping: bool,
    pub relation_rate: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            vocab: 40,
            max_len: 12,
            max_mention_len: 3,
            overlapping: false,
            relation_rate: 0.5,
        }
    }
}

pub fn random_sentence(rng: &mut impl Rng, id: String, cfg: &GenConfig) -> AnnotatedSentence {
    let len = rng.random_range(1..=cfg.max_len);
    let tokens: Vec<String> = (0..len)
        .map(|_| {
            if rng.random_bool(0.25) {
                FILLERS.choose(rng).unwrap().to_string()
            } else {
                format!("w{}", rng.random_range(0..cfg.vocab))
            }
        })
        .collect();
    let mut entities: Vec<Entity> = Vec::new();
    let mut pos = 0;
    while pos < len {
        if rng.random_bool(0.35) {
            let l = rng.random_range(1..=cfg.max_mention_len.min(len - pos));
            let e = Entity::new(pos, pos + l, *ETYPES.choose(rng).unwrap());
            if !entities.contains(&e) {
                entities.push(e);
            }
            pos += if cfg.overlapping { rng.random_range(1..=l) } else { l };
        } else {
            pos += 1;
        }
    }
    let mut relations = Vec::new();
    if entities.len() >= 2 {
        for h in 0..entities.len() {
            for t in 0..entities.len() {
                if h != t && rng.random_bool(cfg.relation_rate / entities.len() as f64) {
                    let r = Relation::new(h, t, *RTYPES.choose(rng).unwrap());
                    if !relations.contains(&r) {
                        relations.push(r);
                    }
                }
            }
        }
    }
    sentence(id, tokens, entities, relations)
}

pub fn random_corpus(rng: &mut impl Rng, n: usize, role: Role, prefix: &str, cfg: &GenConfig) -> AnnotatedCorpus {
    AnnotatedCorpus {
        role,
        sentences: (0..n).map(|i| random_sentence(rng, format!("{prefix}{i}"), cfg)).collect(),
    }
}

/// A noisy copy of `gold`: spans shifted, types changed, relations dropped,
/// reversed or retyped, spurious items added.
pub fn perturb(rng: &mut impl Rng, gold: &AnnotatedSentence) -> AnnotatedSentence {
    let n = gold.tokens().len();
    let mut entities: Vec<Entity> = gold
        .entities
        .iter()
        .map(|e| {
            let mut e = e.clone();
            if rng.random_bool(0.2) {
                e.etype = ETYPES.choose(rng).unwrap().to_string();
            }
            if rng.random_bool(0.15) && e.end < n {
                e.end += 1;
            }
            e
        })
        .collect();
    if n > 0 && rng.random_bool(0.3) {
        let s = rng.random_range(0..n);
        entities.push(Entity::new(s, s + 1, *ETYPES.choose(rng).unwrap()));
    }
    let mut relations: Vec<Relation> = Vec::new();
    for r in &gold.relations {
        if rng.random_bool(0.15) {
            continue;
        }
        let mut r = r.clone();
        if rng.random_bool(0.15) {
            std::mem::swap(&mut r.head, &mut r.tail);
        }
        if rng.random_bool(0.15) {
            r.rtype = RTYPES.choose(rng).unwrap().to_string();
        }
        relations.push(r);
    }
    if entities.len() >= 2 && rng.random_bool(0.3) {
        let h = rng.random_range(0..entities.len());
        let t = (h + 1) % entities.len();
        relations.push(Relation::new(h, t, *RTYPES.choose(rng).unwrap()));
    }
    if rng.random_bool(0.1) {
        if let Some(r) = relations.first().cloned() {
            relations.push(r);
        }
    }
    sentence(gold.id().to_owned(), gold.tokens().to_vec(), entities, relations)
}

/// Corpus where every mention surface has one type and every ordered pair
/// of co-occurring mentions carries one relation type determined by the
/// surfaces; mention tokens never occur outside their mention.
pub fn unambiguous_corpus(rng: &mut impl Rng, n: usize, pool: usize) -> AnnotatedCorpus {
    let surfaces: Vec<(Vec<String>, &str)> = (0..pool)
        .map(|i| {
            let l = 1 + i % 3;
            let tokens = (0..l).map(|j| format!("m{i}_{j}")).collect();
            (tokens, ETYPES[i % ETYPES.len()])
        })
        .collect();
    let sentences = (0..n)
        .map(|k| {
            let mut tokens = Vec::new();
            let mut entities = Vec::new();
            let mut picked = Vec::new();
            for _ in 0..rng.random_range(1..=4) {
                tokens.push(format!("filler{}", rng.random_range(0..5)));
                let i = rng.random_range(0..pool);
                let (surface, etype) = &surfaces[i];
                entities.push(Entity::new(tokens.len(), tokens.len() + surface.len(), *etype));
                tokens.extend(surface.iter().cloned());
                picked.push(i);
            }
            tokens.push(".".into());
            let mut relations = Vec::new();
            for (h, &a) in picked.iter().enumerate() {
                for (t, &b) in picked.iter().enumerate() {
                    if h != t {
                        relations.push(Relation::new(h, t, RTYPES[(a * 7 + b) % RTYPES.len()]));
                    }
                }
            }
            sentence(format!("u{k}"), tokens, entities, relations)
        })
        .collect();
    AnnotatedCorpus {
        role: Role::Gold,
        sentences,
    }
}

/// A random sentence with exactly one `Kill` relation whose arguments are
/// disjoint PER mentions, plus unrelated flat mentions.
pub fn swappable_sentence(rng: &mut impl Rng, id: String) -> AnnotatedSentence {
    loop {
        let cfg = GenConfig {
            max_len: 14,
            relation_rate: 0.0,
            ..GenConfig::default()
        };
        let mut s = random_sentence(rng, id.clone(), &cfg);
        if s.entities.len() < 2 {
            continue;
        }
        let h = rng.random_range(0..s.entities.len());
        let mut t = rng.random_range(0..s.entities.len());
        if t == h {
            t = (h + 1) % s.entities.len();
        }
        s.entities[h].etype = "PER".into();
        s.entities[t].etype = "PER".into();
        s.relations.push(Relation::new(h, t, "Kill"));
        if rng.random_bool(0.5) {
            let o = rng.random_range(0..s.entities.len());
            if o != h {
                s.relations.push(Relation::new(o, h, "LiveIn"));
                s.relations.retain({
                    let mut seen = BTreeSet::new();
                    move |r| r.head != r.tail && seen.insert((r.head, r.tail, r.rtype.clone()))
                });
            }
        }
        return s;
    }
}

// --- brute-force references -------------------------------------------------

fn stopwords() -> BTreeSet<String> {
    ieval::overlap::DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

/// Mention novelty by scanning every training mention; default policy.
pub fn brute_mention(train: &AnnotatedCorpus, s: &AnnotatedSentence, e: &Entity) -> Novelty {
    let surface = s.span_tokens(e);
    let stop = stopwords();
    let mut partial = false;
    for ts in &train.sentences {
        for te in &ts.entities {
            let tsurface = ts.span_tokens(te);
            if te.etype != e.etype {
                continue;
            }
            if tsurface == surface {
                return Novelty::Exact;
            }
            if surface
                .iter()
                .any(|tok| !stop.contains(&tok.to_lowercase()) && tsurface.contains(tok))
            {
                partial = true;
            }
        }
    }
    if partial {
        Novelty::Partial
    } else {
        Novelty::New
    }
}

/// Relation novelty by scanning every training relation; default policy.
pub fn brute_relation(train: &AnnotatedCorpus, s: &AnnotatedSentence, r: &Relation) -> Novelty {
    let head = s.span_tokens(&s.entities[r.head]);
    let tail = s.span_tokens(&s.entities[r.tail]);
    let mut partial = false;
    for ts in &train.sentences {
        for tr in &ts.relations {
            if tr.rtype != r.rtype {
                continue;
            }
            let th = ts.span_tokens(&ts.entities[tr.head]);
            let tt = ts.span_tokens(&ts.entities[tr.tail]);
            if th == head && tt == tail {
                return Novelty::Exact;
            }
            partial |= th == head || tt == tail;
        }
    }
    if partial {
        Novelty::Partial
    } else {
        Novelty::New
    }
}

/// (tp, fp, fn) for exact-match NER via set arithmetic.
pub fn brute_entity_counts(gold: &AnnotatedSentence, pred: &AnnotatedSentence) -> (usize, usize, usize) {
    let g: BTreeSet<&Entity> = gold.entities.iter().collect();
    let p: BTreeSet<&Entity> = pred.entities.iter().collect();
    let tp = g.intersection(&p).count();
    (tp, p.len() - tp, g.len() - tp)
}

type RelKey = (usize, usize, Option<String>, usize, usize, Option<String>, String);

fn rel_key(s: &AnnotatedSentence, r: &Relation, typed: bool) -> RelKey {
    let h = &s.entities[r.head];
    let t = &s.entities[r.tail];
    let ty = |e: &Entity| typed.then(|| e.etype.clone());
    (h.start, h.end, ty(h), t.start, t.end, ty(t), r.rtype.clone())
}

/// (tp, fp, fn) for Strict or Boundaries relation matching via multiset
/// intersection, after collapsing exact duplicate predictions.
pub fn brute_relation_counts(
    gold: &AnnotatedSentence,
    pred: &AnnotatedSentence,
    criterion: Criterion,
) -> (usize, usize, usize) {
    assert!(criterion != Criterion::Relaxed);
    let typed = criterion == Criterion::Strict;
    let distinct: BTreeSet<RelKey> = pred.relations.iter().map(|r| rel_key(pred, r, true)).collect();
    let mut p: HashMap<RelKey, usize> = HashMap::new();
    for mut k in distinct {
        if !typed {
            k.2 = None;
            k.5 = None;
        }
        *p.entry(k).or_default() += 1;
    }
    let mut g: HashMap<RelKey, usize> = HashMap::new();
    for r in &gold.relations {
        *g.entry(rel_key(gold, r, typed)).or_default() += 1;
    }
    let tp: usize = g.iter().map(|(k, &c)| c.min(p.get(k).copied().unwrap_or(0))).sum();
    let np: usize = p.values().sum();
    (tp, np - tp, gold.relations.len() - tp)
}

/// Tokens after exchanging the two argument spans by direct splicing.
pub fn brute_swap_tokens(s: &AnnotatedSentence, r: &Relation) -> Vec<String> {
    let (a, b) = {
        let h = &s.entities[r.head];
        let t = &s.entities[r.tail];
        if h.start < t.start { (h, t) } else { (t, h) }
    };
    let tok = s.tokens();
    [&tok[..a.start], &tok[b.start..b.end], &tok[a.end..b.start], &tok[a.start..a.end], &tok[b.end..]].concat()
}

pub fn surfaces(s: &AnnotatedSentence) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for e in &s.entities {
        *out.entry((s.span_tokens(e).join(" "), e.etype.clone())).or_default() += 1;
    }
    out
}

// --- CLI golden cases ---------------------------------------------------------

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    /// When set, the artifact is this file (relative to a scratch dir)
    /// instead of stdout.
    pub artifact: Option<&'static str>,
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "partition.json",
        args: &["partition", "--train", "fixtures/train.json", "--eval", "fixtures/eval.json"],
        artifact: None,
    },
    GoldenCase {
        name: "partition_summary.json",
        args: &["partition", "--train", "fixtures/train.json", "--eval", "fixtures/eval.json", "--output", "{tmp}/p.json", "--summary", "{tmp}/summary"],
        artifact: Some("summary"),
    },
    GoldenCase {
        name: "partition_summary.md",
        args: &["partition", "--train", "fixtures/train.json", "--eval", "fixtures/eval.json", "--output", "{tmp}/p.json", "--summary", "{tmp}/summary", "--format", "markdown"],
        artifact: Some("summary"),
    },
    GoldenCase {
        name: "score.json",
        args: &["score", "--train", "fixtures/train.json", "--gold", "fixtures/eval.json", "--pred", "fixtures/pred.json"],
        artifact: None,
    },
    GoldenCase {
        name: "score.md",
        args: &["score", "--train", "fixtures/train.json", "--gold", "fixtures/eval.json", "--pred", "fixtures/pred.json", "--format", "markdown"],
        artifact: None,
    },
    GoldenCase {
        name: "score.csv",
        args: &["score", "--train", "fixtures/train.json", "--gold", "fixtures/eval.json", "--pred", "fixtures/pred.json", "--format", "csv"],
        artifact: None,
    },
    GoldenCase {
        name: "score_self.json",
        args: &["score", "--train", "fixtures/train.json", "--gold", "fixtures/eval.json", "--pred", "fixtures/eval.json", "--criterion", "relaxed"],
        artifact: None,
    },
    GoldenCase {
        name: "stats.json",
        args: &["stats", "--train", "fixtures/train.json", "--eval", "fixtures/eval.json"],
        artifact: None,
    },
    GoldenCase {
        name: "stats.md",
        args: &["stats", "--train", "fixtures/train.json", "--eval", "fixtures/eval.json", "--format", "markdown"],
        artifact: None,
    },
    GoldenCase {
        name: "swap.json",
        args: &["swap", "generate", "--input", "fixtures/swap.json", "--relation", "Kill"],
        artifact: None,
    },
    GoldenCase {
        name: "swap_skipped.json",
        args: &["swap", "generate", "--input", "fixtures/swap.json", "--relation", "Kill", "--output", "{tmp}/s.json", "--skipped", "{tmp}/skipped"],
        artifact: Some("skipped"),
    },
    GoldenCase {
        name: "swap_eval.json",
        args: &["swap", "eval", "--gold", "fixtures/golden/swap.json", "--pred", "fixtures/swap_pred.json", "--relation", "Kill"],
        artifact: None,
    },
    GoldenCase {
        name: "swap_eval.md",
        args: &["swap", "eval", "--gold", "fixtures/golden/swap.json", "--pred", "fixtures/swap_pred.json", "--relation", "Kill", "--format", "markdown"],
        artifact: None,
    },
    GoldenCase {
        name: "swap_eval.csv",
        args: &["swap", "eval", "--gold", "fixtures/golden/swap.json", "--pred", "fixtures/swap_pred.json", "--relation", "Kill", "--format", "csv"],
        artifact: None,
    },
];

pub struct RunOutput {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

pub fn run_cli(args: &[&str]) -> RunOutput {
    let out = Command::new(env!("CARGO_BIN_EXE_ieval"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove(ieval::cli::STOPWORDS_ENV)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs");
    RunOutput {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Runs a golden case and returns its artifact bytes.
pub fn run_golden(case: &GoldenCase) -> Vec<u8> {
    let tmp = tempfile::tempdir().unwrap();
    let tmp_str = tmp.path().to_str().unwrap().to_owned();
    let args: Vec<String> = case.args.iter().map(|a| a.replace("{tmp}", &tmp_str)).collect();
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = run_cli(&refs);
    assert_eq!(out.code, 0, "{}: {}", case.name, out.stderr);
    match case.artifact {
        None => out.stdout,
        Some(file) => std::fs::read(tmp.path().join(file)).unwrap(),
    }
}

pub fn golden_path(name: &str) -> PathBuf {
    fixture_dir().join("golden").join(name)
}
