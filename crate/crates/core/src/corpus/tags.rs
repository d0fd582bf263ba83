//! IOB1 / IOB2 / IOBES tag sequences and their conversion to and from spans.

use std::fmt;
use std::str::FromStr;

use super::{Entity, Sentence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Iob1,
    Iob2,
    Iobes,
}

impl Scheme {
    fn prefixes(self) -> &'static [char] {
        match self {
            Scheme::Iob1 | Scheme::Iob2 => &['B', 'I'],
            Scheme::Iobes => &['B', 'I', 'E', 'S'],
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Iob1 => "IOB1",
            Scheme::Iob2 => "IOB2",
            Scheme::Iobes => "IOBES",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iob1" | "iob" => Ok(Scheme::Iob1),
            "iob2" | "bio" => Ok(Scheme::Iob2),
            "iobes" | "bioes" => Ok(Scheme::Iobes),
            other => Err(Error::UnsupportedFormat(format!("scheme {other}"))),
        }
    }
}

/// Strict decoding rejects sequences that are not well-formed for their
/// scheme; lenient decoding repairs them the way conlleval does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    Strict,
    #[default]
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSequence {
    pub scheme: Scheme,
    pub labels: Vec<String>,
}

impl TagSequence {
    pub fn new(scheme: Scheme, labels: Vec<String>) -> Self {
        TagSequence { scheme, labels }
    }

    /// Builds a sequence from whitespace-separated labels.
    pub fn parse(scheme: Scheme, labels: &str) -> Self {
        TagSequence {
            scheme,
            labels: labels.split_whitespace().map(str::to_owned).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

impl fmt::Display for TagSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Tag<'a> {
    // 'O' for outside
    prefix: char,
    etype: &'a str,
}

const OUTSIDE: Tag<'static> = Tag {
    prefix: 'O',
    etype: "",
};

fn parse_label<'a>(label: &'a str, scheme: Scheme, strictness: Strictness) -> Result<Tag<'a>> {
    if label == "O" {
        return Ok(OUTSIDE);
    }
    let parsed = label.split_once('-').and_then(|(prefix, etype)| {
        let mut chars = prefix.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if !etype.is_empty() => Some(Tag { prefix: c, etype }),
            _ => None,
        }
    });
    let unknown = || Error::UnknownTagPrefix {
        label: label.to_owned(),
        scheme: scheme.to_string(),
    };
    match (parsed, strictness) {
        (Some(tag), Strictness::Strict) if scheme.prefixes().contains(&tag.prefix) => Ok(tag),
        (Some(tag), Strictness::Lenient) if Scheme::Iobes.prefixes().contains(&tag.prefix) => {
            Ok(tag)
        }
        (_, Strictness::Strict) => Err(unknown()),
        (_, Strictness::Lenient) => {
            log::warn!("treating unrecognised label `{label}` as O");
            Ok(OUTSIDE)
        }
    }
}

fn continues(prev: Tag<'_>, etype: &str) -> bool {
    matches!(prev.prefix, 'B' | 'I') && prev.etype == etype
}

fn check_well_formed(scheme: Scheme, tags: &[Tag<'_>]) -> Result<()> {
    let ill = |position: usize, detail: &str| Error::IllFormedSequence {
        scheme: scheme.to_string(),
        position,
        detail: detail.to_owned(),
    };
    let mut prev = OUTSIDE;
    for (i, &tag) in tags.iter().enumerate() {
        match (scheme, tag.prefix) {
            (Scheme::Iob2, 'I') if !continues(prev, tag.etype) => {
                return Err(ill(i, "I- tag does not continue a chunk of the same type"));
            }
            (Scheme::Iob1, 'B') if !continues(prev, tag.etype) => {
                return Err(ill(i, "B- tag does not follow a chunk of the same type"));
            }
            (Scheme::Iobes, 'I' | 'E') if !continues(prev, tag.etype) => {
                return Err(ill(i, "continuation tag without an open chunk"));
            }
            (Scheme::Iobes, _) if matches!(prev.prefix, 'B' | 'I') => {
                let closes = matches!(tag.prefix, 'I' | 'E') && tag.etype == prev.etype;
                if !closes {
                    return Err(ill(i, "chunk left open"));
                }
            }
            _ => {}
        }
        prev = tag;
    }
    if scheme == Scheme::Iobes && matches!(prev.prefix, 'B' | 'I') {
        return Err(ill(tags.len(), "chunk left open at end of sequence"));
    }
    Ok(())
}

fn chunk_ends(prev: Tag<'_>, tag: Tag<'_>) -> bool {
    match (prev.prefix, tag.prefix) {
        ('E' | 'S', _) => true,
        ('B' | 'I', 'B' | 'S' | 'O') => true,
        ('O', _) => false,
        _ => prev.etype != tag.etype,
    }
}

fn chunk_starts(prev: Tag<'_>, tag: Tag<'_>) -> bool {
    match (prev.prefix, tag.prefix) {
        (_, 'O') => false,
        (_, 'B' | 'S') => true,
        ('E' | 'S' | 'O', 'E' | 'I') => true,
        _ => prev.etype != tag.etype,
    }
}

/// Decodes the maximal chunks of a tag sequence.
pub fn tags_to_spans(tags: &TagSequence, strictness: Strictness) -> Result<Vec<Entity>> {
    let parsed = tags
        .labels
        .iter()
        .map(|l| parse_label(l, tags.scheme, strictness))
        .collect::<Result<Vec<_>>>()?;
    if strictness == Strictness::Strict {
        check_well_formed(tags.scheme, &parsed)?;
    }

    let mut spans = Vec::new();
    let mut open: Option<(usize, &str)> = None;
    let mut prev = OUTSIDE;
    for (i, &tag) in parsed.iter().enumerate() {
        if open.is_some() && chunk_ends(prev, tag) {
            let (start, etype) = open.take().expect("chunk is open");
            spans.push(Entity::new(start, i, etype));
        }
        if chunk_starts(prev, tag) {
            open = Some((i, tag.etype));
        }
        prev = tag;
    }
    if let Some((start, etype)) = open {
        spans.push(Entity::new(start, parsed.len(), etype));
    }
    Ok(spans)
}

/// Encodes non-overlapping mentions of `sentence` in the given scheme.
pub fn spans_to_tags(sentence: &Sentence, mentions: &[Entity], scheme: Scheme) -> Result<TagSequence> {
    let n = sentence.tokens.len();
    let mut sorted: Vec<&Entity> = mentions.iter().collect();
    sorted.sort_by_key(|e| (e.start, e.end));
    for m in &sorted {
        if m.start >= m.end || m.end > n {
            return Err(Error::IndexOutOfRange {
                sent_id: sentence.sent_id.clone(),
                detail: format!("span ({}, {}) outside {} tokens", m.start, m.end, n),
            });
        }
    }
    for pair in sorted.windows(2) {
        if pair[0].overlaps(pair[1]) {
            return Err(Error::OverlappingSpans(
                pair[0].start,
                pair[0].end,
                pair[1].start,
                pair[1].end,
            ));
        }
    }

    let mut labels = vec!["O".to_owned(); n];
    let mut prev: Option<&Entity> = None;
    for m in sorted {
        let ty = &m.etype;
        match scheme {
            Scheme::Iob2 => {
                labels[m.start] = format!("B-{ty}");
                for label in &mut labels[m.start + 1..m.end] {
                    *label = format!("I-{ty}");
                }
            }
            Scheme::Iob1 => {
                let adjacent_same = prev.is_some_and(|p| p.end == m.start && p.etype == m.etype);
                for label in &mut labels[m.start..m.end] {
                    *label = format!("I-{ty}");
                }
                if adjacent_same {
                    labels[m.start] = format!("B-{ty}");
                }
            }
            Scheme::Iobes => {
                if m.len() == 1 {
                    labels[m.start] = format!("S-{ty}");
                } else {
                    labels[m.start] = format!("B-{ty}");
                    for label in &mut labels[m.start + 1..m.end - 1] {
                        *label = format!("I-{ty}");
                    }
                    labels[m.end - 1] = format!("E-{ty}");
                }
            }
        }
        prev = Some(m);
    }
    Ok(TagSequence::new(scheme, labels))
}

/// Re-encodes a sequence in another scheme by decoding and re-encoding.
pub fn convert_scheme(tags: &TagSequence, target: Scheme, strictness: Strictness) -> Result<TagSequence> {
    let spans = tags_to_spans(tags, strictness)?;
    let placeholder = Sentence {
        doc_id: String::new(),
        sent_id: String::new(),
        tokens: vec![String::new(); tags.len()],
    };
    spans_to_tags(&placeholder, &spans, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence(n: usize) -> Sentence {
        Sentence {
            doc_id: "d0".into(),
            sent_id: "s".into(),
            tokens: (0..n).map(|i| format!("t{i}")).collect(),
        }
    }

    fn decode(scheme: Scheme, labels: &str, strictness: Strictness) -> Result<Vec<Entity>> {
        tags_to_spans(&TagSequence::parse(scheme, labels), strictness)
    }

    #[test]
    fn iobes_example_decodes() {
        let spans = decode(
            Scheme::Iobes,
            "B-PER E-PER O S-ORG O B-LOC E-LOC O",
            Strictness::Strict,
        )
        .unwrap();
        assert_eq!(
            spans,
            vec![
                Entity::new(0, 2, "PER"),
                Entity::new(3, 4, "ORG"),
                Entity::new(5, 7, "LOC")
            ]
        );
    }

    #[test]
    fn iobes_example_encodes() {
        let spans = vec![
            Entity::new(0, 2, "PER"),
            Entity::new(3, 4, "ORG"),
            Entity::new(5, 7, "LOC"),
        ];
        let tags = spans_to_tags(&sentence(8), &spans, Scheme::Iobes).unwrap();
        assert_eq!(tags.to_string(), "B-PER E-PER O S-ORG O B-LOC E-LOC O");
    }

    #[test]
    fn all_outside() {
        assert!(decode(Scheme::Iob2, "O O O", Strictness::Strict).unwrap().is_empty());
        let tags = spans_to_tags(&sentence(3), &[], Scheme::Iobes).unwrap();
        assert_eq!(tags.to_string(), "O O O");
        for from in [Scheme::Iob1, Scheme::Iob2, Scheme::Iobes] {
            for to in [Scheme::Iob1, Scheme::Iob2, Scheme::Iobes] {
                let t = TagSequence::parse(from, "O O");
                assert_eq!(convert_scheme(&t, to, Strictness::Strict).unwrap().to_string(), "O O");
            }
        }
    }

    #[test]
    fn lenient_repairs_stray_continuations() {
        assert_eq!(
            decode(Scheme::Iob2, "O I-LOC I-LOC", Strictness::Lenient).unwrap(),
            vec![Entity::new(1, 3, "LOC")]
        );
        assert_eq!(
            decode(Scheme::Iobes, "I-PER E-PER", Strictness::Lenient).unwrap(),
            vec![Entity::new(0, 2, "PER")]
        );
        // a type change closes the previous chunk
        assert_eq!(
            decode(Scheme::Iob2, "B-PER I-LOC", Strictness::Lenient).unwrap(),
            vec![Entity::new(0, 1, "PER"), Entity::new(1, 2, "LOC")]
        );
    }

    #[test]
    fn strict_rejects_ill_formed() {
        for (scheme, labels) in [
            (Scheme::Iob2, "O I-LOC"),
            (Scheme::Iob2, "B-PER I-LOC"),
            (Scheme::Iobes, "I-PER E-PER"),
            (Scheme::Iobes, "B-PER O"),
            (Scheme::Iobes, "B-PER"),
            (Scheme::Iobes, "B-PER S-PER"),
            (Scheme::Iob1, "O B-PER"),
        ] {
            let err = decode(scheme, labels, Strictness::Strict).unwrap_err();
            assert!(matches!(err, Error::IllFormedSequence { .. }), "{labels}: {err}");
        }
    }

    #[test]
    fn strict_rejects_unknown_prefix() {
        for (scheme, labels) in [(Scheme::Iob2, "S-PER"), (Scheme::Iobes, "X-PER"), (Scheme::Iob1, "PER")] {
            let err = decode(scheme, labels, Strictness::Strict).unwrap_err();
            assert!(matches!(err, Error::UnknownTagPrefix { .. }), "{labels}");
        }
        // lenient mode drops unparseable labels
        assert!(decode(Scheme::Iob2, "PER", Strictness::Lenient).unwrap().is_empty());
    }

    #[test]
    fn iob1_separates_adjacent_chunks_with_b() {
        let spans = vec![Entity::new(0, 2, "PER"), Entity::new(2, 3, "PER"), Entity::new(3, 4, "LOC")];
        let tags = spans_to_tags(&sentence(4), &spans, Scheme::Iob1).unwrap();
        assert_eq!(tags.to_string(), "I-PER I-PER B-PER I-LOC");
        assert_eq!(tags_to_spans(&tags, Strictness::Strict).unwrap(), spans);
    }

    #[test]
    fn conversions() {
        let iob2 = TagSequence::parse(Scheme::Iob2, "B-PER I-PER");
        assert_eq!(
            convert_scheme(&iob2, Scheme::Iobes, Strictness::Strict).unwrap().to_string(),
            "B-PER E-PER"
        );
        let iobes = TagSequence::parse(Scheme::Iobes, "S-ORG");
        assert_eq!(
            convert_scheme(&iobes, Scheme::Iob2, Strictness::Strict).unwrap().to_string(),
            "B-ORG"
        );
    }

    #[test]
    fn overlapping_spans_rejected() {
        let err = spans_to_tags(
            &sentence(4),
            &[Entity::new(0, 2, "PER"), Entity::new(1, 3, "LOC")],
            Scheme::Iob2,
        )
        .unwrap_err();
        assert!(matches!(err, Error::OverlappingSpans(0, 2, 1, 3)));
    }
}
