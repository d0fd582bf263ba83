//! Column-based CoNLL reader and writer.

use std::io::BufRead;

use super::tags::{spans_to_tags, tags_to_spans, Scheme, Strictness, TagSequence};
use super::{AnnotatedCorpus, AnnotatedSentence, Role, Sentence};
use crate::error::{Error, Result};

const DOCSTART: &str = "-DOCSTART-";

#[derive(Debug, Clone, Copy)]
pub struct ConllOptions {
    pub token_column: usize,
    pub tag_column: usize,
    pub scheme: Scheme,
    pub strictness: Strictness,
}

impl Default for ConllOptions {
    fn default() -> Self {
        ConllOptions {
            token_column: 0,
            tag_column: 1,
            scheme: Scheme::Iob2,
            strictness: Strictness::Lenient,
        }
    }
}

struct Builder {
    options: ConllOptions,
    corpus: AnnotatedCorpus,
    doc: usize,
    sent_in_doc: usize,
    started: bool,
    tokens: Vec<String>,
    labels: Vec<String>,
}

impl Builder {
    fn flush(&mut self) -> Result<()> {
        if self.tokens.is_empty() {
            return Ok(());
        }
        let tokens = std::mem::take(&mut self.tokens);
        let labels = std::mem::take(&mut self.labels);
        let entities = tags_to_spans(
            &TagSequence::new(self.options.scheme, labels),
            self.options.strictness,
        )?;
        let doc_id = format!("d{}", self.doc);
        let sent_id = format!("{doc_id}#{}", self.sent_in_doc);
        self.sent_in_doc += 1;
        self.started = true;
        self.corpus.sentences.push(AnnotatedSentence {
            sentence: Sentence {
                doc_id,
                sent_id,
                tokens,
            },
            entities,
            relations: Vec::new(),
        });
        Ok(())
    }

    fn new_document(&mut self) -> Result<()> {
        self.flush()?;
        if self.started {
            self.doc += 1;
            self.sent_in_doc = 0;
        }
        self.started = true;
        Ok(())
    }
}

/// Reads a CoNLL file: one token per line, whitespace-separated columns,
/// blank lines between sentences and `-DOCSTART-` lines between documents.
pub fn parse_conll<R: BufRead>(reader: R, options: ConllOptions) -> Result<AnnotatedCorpus> {
    let needed = options.token_column.max(options.tag_column) + 1;
    let mut b = Builder {
        options,
        corpus: AnnotatedCorpus::new(Role::Gold),
        doc: 0,
        sent_in_doc: 0,
        started: false,
        tokens: Vec::new(),
        labels: Vec::new(),
    };
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let columns: Vec<&str> = line.split_whitespace().collect();
        if columns.is_empty() {
            b.flush()?;
            continue;
        }
        if columns[0] == DOCSTART {
            b.new_document()?;
            continue;
        }
        if columns.len() < needed {
            return Err(Error::MalformedLine {
                line: lineno + 1,
                expected: needed,
                found: columns.len(),
            });
        }
        b.tokens.push(columns[options.token_column].to_owned());
        b.labels.push(columns[options.tag_column].to_owned());
    }
    b.flush()?;
    if b.corpus.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(b.corpus)
}

/// Writes a two-column file (`token tag`) with a blank line after every
/// sentence. With `doc_markers`, a `-DOCSTART- O` block precedes each
/// document.
pub fn write_conll(corpus: &AnnotatedCorpus, scheme: Scheme, doc_markers: bool) -> Result<String> {
    let mut out = String::new();
    let mut current_doc: Option<&str> = None;
    for s in &corpus.sentences {
        if doc_markers && current_doc != Some(s.sentence.doc_id.as_str()) {
            out.push_str(DOCSTART);
            out.push_str(" O\n\n");
            current_doc = Some(&s.sentence.doc_id);
        }
        let tags = spans_to_tags(&s.sentence, &s.entities, scheme)?;
        for (token, label) in s.sentence.tokens.iter().zip(&tags.labels) {
            if token.is_empty() || token.chars().any(char::is_whitespace) {
                return Err(Error::WhitespaceInToken(token.clone()));
            }
            out.push_str(token);
            out.push(' ');
            out.push_str(label);
            out.push('\n');
        }
        out.push('\n');
    }
    Ok(out)
}
