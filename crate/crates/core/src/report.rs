//! Deterministic JSON / Markdown / CSV rendering of reports.
//!
//! JSON keeps full precision with sorted keys. Markdown tables show
//! percentages with one decimal; CSV shows fractions with four decimals.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::behavior::{Skip, SwapScores};
use crate::corpus::Violation;
use crate::error::{Error, Result};
use crate::evaluation::Evaluation;
use crate::metrics::{Averaging, PrfCounts, ScoreReport};
use crate::overlap::{ClassCounts, KindSummary, PartitionSummary};
use crate::stats::{DatasetStats, StatsReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::UnsupportedFormat(other.to_owned())),
        }
    }
}

pub trait Render: Serialize {
    fn markdown(&self) -> String;
    fn csv(&self) -> String;
}

/// Serializes with sorted object keys and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("report serializes");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

pub fn emit_report<T: Render>(report: &T, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Markdown => report.markdown(),
        OutputFormat::Csv => report.csv(),
    }
}

fn pct(x: f64) -> String {
    format!("{:.1}", x * 100.0)
}

fn frac(x: f64) -> String {
    format!("{x:.4}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

struct Table {
    out: String,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", header.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
        Table { out }
    }

    fn row(&mut self, cells: &[String]) {
        let cells: Vec<String> = cells.iter().map(|c| md_cell(c)).collect();
        let _ = writeln!(self.out, "| {} |", cells.join(" | "));
    }

    fn finish(self) -> String {
        self.out
    }
}

fn prf_cells(label: &str, s: &PrfCounts) -> Vec<String> {
    vec![label.to_owned(), pct(s.p), pct(s.r), pct(s.f1), s.support.to_string()]
}

fn report_title(r: &ScoreReport) -> String {
    let averaging = match r.averaging {
        Averaging::Micro => "micro",
        Averaging::Macro => "macro",
    };
    match r.task {
        "ner" => format!("NER ({averaging})"),
        _ => format!("RE {} ({averaging})", r.criterion),
    }
}

impl Render for ScoreReport {
    fn markdown(&self) -> String {
        let mut out = format!("## {}\n\n", report_title(self));
        let mut t = Table::new(&["label", "P", "R", "F1", "support"]);
        for (label, s) in &self.per_type {
            t.row(&prf_cells(label, s));
        }
        t.row(&prf_cells("ALL", &self.overall));
        out.push_str(&t.finish());
        if let Some(buckets) = &self.per_novelty {
            out.push('\n');
            let mut t = Table::new(&["novelty", "P", "R", "F1", "support"]);
            for (n, s) in buckets {
                t.row(&prf_cells(n.as_str(), s));
            }
            out.push_str(&t.finish());
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from(CSV_SCORE_HEADER);
        push_score_rows(&mut out, self);
        out
    }
}

const CSV_SCORE_HEADER: &str = "task,criterion,group,type,P,R,F1,support\n";

fn push_score_rows(out: &mut String, r: &ScoreReport) {
    let mut row = |group: &str, label: &str, s: &PrfCounts| {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.task,
            r.criterion,
            group,
            csv_field(label),
            frac(s.p),
            frac(s.r),
            frac(s.f1),
            s.support
        );
    };
    for (label, s) in &r.per_type {
        row("type", label, s);
    }
    row("overall", "ALL", &r.overall);
    if let Some(buckets) = &r.per_novelty {
        for (n, s) in buckets {
            row("novelty", n.as_str(), s);
        }
    }
}

impl Render for Evaluation {
    fn markdown(&self) -> String {
        let mut sections = vec![self.ner.markdown()];
        sections.extend(self.re.values().map(Render::markdown));
        sections.join("\n")
    }

    fn csv(&self) -> String {
        let mut out = String::from(CSV_SCORE_HEADER);
        push_score_rows(&mut out, &self.ner);
        for r in self.re.values() {
            push_score_rows(&mut out, r);
        }
        out
    }
}

fn class_cells(label: &str, c: &ClassCounts) -> Vec<String> {
    vec![
        label.to_owned(),
        pct(c.exact_proportion),
        pct(c.partial_proportion),
        pct(c.new_proportion),
        c.total.to_string(),
    ]
}

fn kind_table(kind: &KindSummary) -> String {
    let mut t = Table::new(&["type", "exact", "partial", "new", "count"]);
    for (label, c) in &kind.per_type {
        t.row(&class_cells(label, c));
    }
    t.row(&class_cells("ALL", &kind.all));
    t.finish()
}

fn push_class_rows(out: &mut String, kind: &str, summary: &KindSummary) {
    let mut row = |label: &str, c: &ClassCounts| {
        let _ = writeln!(
            out,
            "{kind},{},{},{},{},{},{},{},{}",
            csv_field(label),
            c.exact,
            c.partial,
            c.new,
            c.total,
            frac(c.exact_proportion),
            frac(c.partial_proportion),
            frac(c.new_proportion)
        );
    };
    for (label, c) in &summary.per_type {
        row(label, c);
    }
    row("ALL", &summary.all);
}

const CSV_CLASS_HEADER: &str = "kind,type,exact,partial,new,total,exact_p,partial_p,new_p\n";

impl Render for PartitionSummary {
    fn markdown(&self) -> String {
        format!(
            "## Entity mentions\n\n{}\n## Relations\n\n{}",
            kind_table(&self.entities),
            kind_table(&self.relations)
        )
    }

    fn csv(&self) -> String {
        let mut out = String::from(CSV_CLASS_HEADER);
        push_class_rows(&mut out, "entity", &self.entities);
        push_class_rows(&mut out, "relation", &self.relations);
        out
    }
}

fn dataset_rows(s: &DatasetStats) -> [(&'static str, usize); 5] {
    [
        ("sentences", s.sentences),
        ("tokens", s.tokens),
        ("mention_occurrences", s.mention_occurrences),
        ("unique_mentions", s.unique_mentions),
        ("relations", s.relations),
    ]
}

impl Render for StatsReport {
    fn markdown(&self) -> String {
        let mut out = String::from("## Dataset\n\n");
        let mut t = Table::new(&["statistic", "train", "eval"]);
        for ((name, train), (_, eval)) in dataset_rows(&self.train).iter().zip(dataset_rows(&self.eval)) {
            t.row(&[name.to_string(), train.to_string(), eval.to_string()]);
        }
        out.push_str(&t.finish());

        out.push_str("\n## Attributes\n\n");
        let mut t = Table::new(&["attribute", "value"]);
        for (name, value, is_ratio) in self.profile.rows() {
            let shown = if is_ratio { format!("{}%", pct(value)) } else { format!("{value:.1}") };
            t.row(&[name.to_owned(), shown]);
        }
        out.push_str(&t.finish());

        out.push_str("\n## Mention overlap\n\n");
        let mut t = Table::new(&["type", "exact", "partial", "new", "count"]);
        for (label, c) in &self.overlap.per_type {
            t.row(&class_cells(label, c));
        }
        t.row(&class_cells("ALL", &self.overlap.all));
        out.push_str(&t.finish());
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("section,name,value\n");
        for (name, v) in dataset_rows(&self.train) {
            let _ = writeln!(out, "train,{name},{v}");
        }
        for (name, v) in dataset_rows(&self.eval) {
            let _ = writeln!(out, "eval,{name},{v}");
        }
        for (name, v, _) in self.profile.rows() {
            let _ = writeln!(out, "profile,{name},{}", frac(v));
        }
        let mut push = |label: &str, c: &ClassCounts| {
            let label = csv_field(label);
            let _ = writeln!(out, "overlap,{label}:exact,{}", frac(c.exact_proportion));
            let _ = writeln!(out, "overlap,{label}:partial,{}", frac(c.partial_proportion));
            let _ = writeln!(out, "overlap,{label}:new,{}", frac(c.new_proportion));
        };
        for (label, c) in &self.overlap.per_type {
            push(label, c);
        }
        push("ALL", &self.overlap.all);
        out
    }
}

/// Rows of the swap experiment, one per target relation type.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SwapTable(pub Vec<SwapScores>);

impl Render for SwapTable {
    fn markdown(&self) -> String {
        let mut t = Table::new(&["relation", "NER ↑", "RE ↑", "revRE ↓"]);
        for s in &self.0 {
            t.row(&[s.relation.clone(), pct(s.ner.f1), pct(s.re.f1), pct(s.revre.f1)]);
        }
        t.finish()
    }

    fn csv(&self) -> String {
        let mut out = String::from("relation,ner_f1,re_f1,revre_f1\n");
        for s in &self.0 {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                csv_field(&s.relation),
                frac(s.ner.f1),
                frac(s.re.f1),
                frac(s.revre.f1)
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SkipReport(pub Vec<Skip>);

impl Render for SkipReport {
    fn markdown(&self) -> String {
        let mut t = Table::new(&["sentence", "reason"]);
        for s in &self.0 {
            t.row(&[s.sent_id.clone(), s.reason.as_str().to_owned()]);
        }
        t.finish()
    }

    fn csv(&self) -> String {
        let mut out = String::from("sent_id,reason\n");
        for s in &self.0 {
            let _ = writeln!(out, "{},{}", csv_field(&s.sent_id), s.reason.as_str());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport(pub Vec<Violation>);

impl Render for ValidationReport {
    fn markdown(&self) -> String {
        let mut t = Table::new(&["sentence", "severity", "code", "message"]);
        for v in &self.0 {
            t.row(&[
                v.sent_id.clone(),
                format!("{:?}", v.severity).to_lowercase(),
                v.code.to_owned(),
                v.message.clone(),
            ]);
        }
        t.finish()
    }

    fn csv(&self) -> String {
        let mut out = String::from("sent_id,severity,code,message\n");
        for v in &self.0 {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                csv_field(&v.sent_id),
                format!("{:?}", v.severity).to_lowercase(),
                v.code,
                csv_field(&v.message)
            );
        }
        out
    }
}
