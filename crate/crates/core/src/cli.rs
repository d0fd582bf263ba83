//! The `ieval` command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O or format error,
//! 3 bad flags.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::warn;

use crate::baselines::retention;
use crate::behavior::{evaluate_swap, swap_corpus, SwapSpec};
use crate::corpus::{
    corpus_from_records, parse_conll, parse_span_json_records, records_to_json, to_span_json, validate_corpus,
    write_conll, AnnotatedCorpus, ConllOptions, Role, Scheme, Severity, Strictness,
};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate, EvaluationOptions, NoveltySource};
use crate::metrics::{Averaging, Criterion};
use crate::overlap::{partition_corpus, CorpusNovelty, NormalizationPolicy, TrainIndex};
use crate::report::{emit_report, to_json, OutputFormat, SkipReport, SwapTable, ValidationReport};
use crate::stats::stats_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Environment variable naming a stopword file (one token per line).
pub const STOPWORDS_ENV: &str = "IEVAL_STOPWORDS";

#[derive(Debug, Parser)]
#[command(name = "ieval", version, about = "Overlap-aware evaluation for NER and end-to-end relation extraction")]
struct Cli {
    /// Key-value file supplying defaults for any flag (`key = value` per line).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus for structural problems.
    Validate(ValidateArgs),
    /// Convert between CoNLL and span-JSON, or between tagging schemes.
    Convert(ConvertArgs),
    /// Label every mention and relation of a corpus as exact, partial or new.
    Partition(PartitionArgs),
    /// Score predictions against gold annotations.
    Score(ScoreArgs),
    /// Run the retention baseline.
    Retention(RetentionArgs),
    /// Head/tail swap behavioral test.
    #[command(subcommand)]
    Swap(SwapCommand),
    /// Dataset statistics and consistency attributes.
    Stats(StatsArgs),
}

#[derive(Debug, Subcommand)]
enum SwapCommand {
    /// Build the swapped corpus for one relation type.
    Generate(SwapGenerateArgs),
    /// Score predictions on a swapped corpus.
    Eval(SwapEvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum InputFormat {
    Auto,
    SpanJson,
    Conll,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum CorpusFormat {
    SpanJson,
    Conll,
}

#[derive(Debug, Clone, Args)]
struct InputOpts {
    /// Corpus format; `auto` picks span-JSON for `.json` files and CoNLL otherwise.
    #[arg(long, value_enum, default_value = "auto")]
    input_format: InputFormat,
    /// Tagging scheme of CoNLL input.
    #[arg(long, default_value = "iob2")]
    scheme: Scheme,
    /// Reject ill-formed tag sequences instead of repairing them.
    #[arg(long)]
    strict_tags: bool,
    /// Zero-based column holding the token in CoNLL input.
    #[arg(long, default_value_t = 0)]
    token_column: usize,
    /// Zero-based column holding the tag in CoNLL input.
    #[arg(long, default_value_t = 1)]
    tag_column: usize,
}

#[derive(Debug, Clone, Args)]
struct PolicyOpts {
    /// Compare surfaces case-insensitively.
    #[arg(long)]
    case_insensitive: bool,
    /// Drop a leading "the"/"a"/"an" before comparing surfaces.
    #[arg(long)]
    strip_article: bool,
    /// Drop a trailing "'s" before comparing surfaces.
    #[arg(long)]
    strip_possessive: bool,
    /// Ignore entity types when classifying overlap.
    #[arg(long)]
    type_insensitive: bool,
    /// Stopword file, one token per line.
    #[arg(long, value_name = "FILE")]
    stopwords: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct OutputOpts {
    /// Report format: json, markdown or csv.
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    input_opts: InputOpts,
    #[command(flatten)]
    out: OutputOpts,
    /// Treat warnings as failures.
    #[arg(long)]
    deny_warnings: bool,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    input_opts: InputOpts,
    /// Output corpus format.
    #[arg(long, value_enum)]
    to: CorpusFormat,
    /// Tagging scheme of CoNLL output (defaults to the input scheme).
    #[arg(long)]
    to_scheme: Option<Scheme>,
    /// Emit a -DOCSTART- line before each document in CoNLL output.
    #[arg(long)]
    doc_markers: bool,
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PartitionArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    eval: PathBuf,
    #[command(flatten)]
    input_opts: InputOpts,
    #[command(flatten)]
    policy: PolicyOpts,
    /// Partition file (span-JSON with novelty labels); stdout by default.
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Also write the class summary here.
    #[arg(long, value_name = "FILE")]
    summary: Option<PathBuf>,
    /// Format of the summary.
    #[arg(long, default_value = "json")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    /// Gold corpus.
    #[arg(long)]
    gold: PathBuf,
    /// Predicted corpus.
    #[arg(long)]
    pred: PathBuf,
    /// Training corpus; enables per-novelty scores.
    #[arg(long, conflicts_with = "partition_file")]
    train: Option<PathBuf>,
    /// Precomputed partition of the gold corpus.
    #[arg(long, requires = "pred_partition_file")]
    partition_file: Option<PathBuf>,
    /// Precomputed partition of the prediction corpus.
    #[arg(long, requires = "partition_file")]
    pred_partition_file: Option<PathBuf>,
    /// Extra relation criterion; Strict and Boundaries are always reported.
    #[arg(long)]
    criterion: Vec<Criterion>,
    /// Averaging over types: micro or macro.
    #[arg(long = "average", default_value = "micro")]
    averaging: Averaging,
    /// Drop mentions of this type, and their relations, before scoring.
    #[arg(long)]
    ignore_type: Vec<String>,
    #[command(flatten)]
    input_opts: InputOpts,
    #[command(flatten)]
    policy: PolicyOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Debug, Args)]
struct RetentionArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    eval: PathBuf,
    /// Predict relations over the gold mentions of the eval corpus.
    #[arg(long)]
    gold_mentions: bool,
    /// Score the predictions against this corpus and print the report.
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Predictions file; stdout when no gold is given.
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Format of the score report.
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    #[command(flatten)]
    input_opts: InputOpts,
    #[command(flatten)]
    policy: PolicyOpts,
}

#[derive(Debug, Args)]
struct SwapGenerateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Target relation type.
    #[arg(long)]
    relation: String,
    /// Keep relations whose arguments have different entity types.
    #[arg(long)]
    allow_type_mismatch: bool,
    /// Swapped corpus; stdout by default.
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Skip report (JSON).
    #[arg(long, value_name = "FILE")]
    skipped: Option<PathBuf>,
    /// Old-span to new-span map per sentence (JSON).
    #[arg(long, value_name = "FILE")]
    remap: Option<PathBuf>,
    #[command(flatten)]
    input_opts: InputOpts,
}

#[derive(Debug, Args)]
struct SwapEvalArgs {
    /// Swapped gold corpus.
    #[arg(long)]
    gold: PathBuf,
    /// Predictions on the swapped corpus.
    #[arg(long)]
    pred: PathBuf,
    /// Target relation type; repeat for one row per type.
    #[arg(long, required = true)]
    relation: Vec<String>,
    #[command(flatten)]
    input_opts: InputOpts,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    eval: PathBuf,
    #[command(flatten)]
    input_opts: InputOpts,
    #[command(flatten)]
    policy: PolicyOpts,
    #[command(flatten)]
    out: OutputOpts,
}

/// Runs the command line and returns the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match apply_config(args) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Maps a library error to the documented exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownCriterion(_) => EXIT_USAGE,
        Error::SentenceMismatch { .. }
        | Error::IneligibleSentence { .. }
        | Error::EmptyEvalCorpus
        | Error::IndexOutOfRange { .. }
        | Error::DuplicateSentId(_)
        | Error::OverlappingSpans(..) => EXIT_VALIDATION,
        _ => EXIT_IO,
    }
}

/// Splices `--config` entries into the argument vector for every flag that
/// is not already given on the command line.
fn apply_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.to_string_lossy().starts_with("--config=")) else {
        return Ok(args);
    };
    let flag = args.remove(pos).to_string_lossy().into_owned();
    let path = match flag.strip_prefix("--config=") {
        Some(p) => PathBuf::from(p),
        None if pos < args.len() => PathBuf::from(args.remove(pos)),
        None => return Ok(args),
    };
    let text = fs::read_to_string(&path)?;
    let given: Vec<String> = args
        .iter()
        .filter_map(|a| a.to_str())
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_owned())
        .collect();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::SchemaViolation(format!("{}:{}: expected `key = value`", path.display(), n + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        if given.contains(&key) {
            continue;
        }
        match value {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            v => {
                args.push(format!("--{key}").into());
                args.push(v.into());
            }
        }
    }
    Ok(args)
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Validate(a) => validate(a),
        Command::Convert(a) => convert(a).map(|_| EXIT_OK),
        Command::Partition(a) => partition(a).map(|_| EXIT_OK),
        Command::Score(a) => score(a).map(|_| EXIT_OK),
        Command::Retention(a) => run_retention(a).map(|_| EXIT_OK),
        Command::Swap(SwapCommand::Generate(a)) => swap_generate(a).map(|_| EXIT_OK),
        Command::Swap(SwapCommand::Eval(a)) => swap_eval(a).map(|_| EXIT_OK),
        Command::Stats(a) => stats(a).map(|_| EXIT_OK),
    }
}

fn resolve_format(path: &Path, opts: &InputOpts) -> CorpusFormat {
    match opts.input_format {
        InputFormat::SpanJson => CorpusFormat::SpanJson,
        InputFormat::Conll => CorpusFormat::Conll,
        InputFormat::Auto => {
            let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
            if json {
                CorpusFormat::SpanJson
            } else {
                CorpusFormat::Conll
            }
        }
    }
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())).into())
}

fn load(path: &Path, opts: &InputOpts, role: Role) -> Result<AnnotatedCorpus> {
    match resolve_format(path, opts) {
        CorpusFormat::SpanJson => {
            let bytes = fs::read(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
            corpus_from_records(parse_span_json_records(&bytes)?, role)
        }
        CorpusFormat::Conll => {
            let options = ConllOptions {
                token_column: opts.token_column,
                tag_column: opts.tag_column,
                scheme: opts.scheme,
                strictness: if opts.strict_tags { Strictness::Strict } else { Strictness::Lenient },
            };
            Ok(parse_conll(BufReader::new(open(path)?), options)?.with_role(role))
        }
    }
}

fn load_novelty(path: &Path, corpus: &AnnotatedCorpus) -> Result<CorpusNovelty> {
    let bytes = fs::read(path)?;
    CorpusNovelty::from_records(&parse_span_json_records(&bytes)?, corpus)
}

fn policy(opts: &PolicyOpts) -> Result<NormalizationPolicy> {
    let mut policy = NormalizationPolicy {
        case_sensitive: !opts.case_insensitive,
        strip_leading_article: opts.strip_article,
        strip_trailing_possessive: opts.strip_possessive,
        type_sensitive: !opts.type_insensitive,
        ..NormalizationPolicy::default()
    };
    let file = opts.stopwords.clone().or_else(|| std::env::var_os(STOPWORDS_ENV).map(PathBuf::from));
    if let Some(file) = file {
        policy = policy.with_stopwords_file(file)?;
    }
    Ok(policy)
}

fn write_out(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<i32> {
    let corpus = match load(&a.input, &a.input_opts, Role::Gold) {
        Ok(c) => c,
        Err(e @ (Error::Io(_) | Error::UnsupportedFormat(_))) => return Err(e),
        Err(e) => {
            eprintln!("invalid: {e}");
            return Ok(EXIT_VALIDATION);
        }
    };
    let violations = validate_corpus(&corpus);
    let failed = violations
        .iter()
        .any(|v| v.severity == Severity::Error || (a.deny_warnings && v.severity == Severity::Warning));
    write_out(a.out.output.as_deref(), &emit_report(&ValidationReport(violations), a.out.format))?;
    Ok(if failed { EXIT_VALIDATION } else { EXIT_OK })
}

fn convert(a: ConvertArgs) -> Result<()> {
    let corpus = load(&a.input, &a.input_opts, Role::Gold)?;
    let body = match a.to {
        CorpusFormat::SpanJson => to_span_json(&corpus),
        CorpusFormat::Conll => {
            if corpus.relation_count() > 0 {
                warn!("CoNLL output drops {} relations", corpus.relation_count());
            }
            write_conll(&corpus, a.to_scheme.unwrap_or(a.input_opts.scheme), a.doc_markers)?
        }
    };
    write_out(a.output.as_deref(), &body)
}

fn train_index(path: &Path, input: &InputOpts, policy_opts: &PolicyOpts) -> Result<(AnnotatedCorpus, TrainIndex)> {
    let train = load(path, input, Role::Train)?;
    let index = TrainIndex::build(&train, policy(policy_opts)?);
    Ok((train, index))
}

fn partition(a: PartitionArgs) -> Result<()> {
    let (_, index) = train_index(&a.train, &a.input_opts, &a.policy)?;
    let eval = load(&a.eval, &a.input_opts, Role::Gold)?;
    let part = partition_corpus(&index, &eval);
    write_out(a.output.as_deref(), &records_to_json(&part.novelty.to_records(&eval)))?;
    if let Some(summary) = &a.summary {
        fs::write(summary, emit_report(&part.summary, a.format))?;
    }
    Ok(())
}

fn score(a: ScoreArgs) -> Result<()> {
    let gold = load(&a.gold, &a.input_opts, Role::Gold)?;
    let pred = load(&a.pred, &a.input_opts, Role::Prediction)?;
    let options = EvaluationOptions {
        averaging: a.averaging,
        extra_criteria: a.criterion,
        ignore_types: a.ignore_type,
    };
    let evaluation = match (&a.train, &a.partition_file, &a.pred_partition_file) {
        (Some(train), _, _) => {
            let (_, index) = train_index(train, &a.input_opts, &a.policy)?;
            evaluate(&gold, &pred, NoveltySource::Index(&index), &options)?
        }
        (None, Some(gp), Some(pp)) => {
            let gold_nov = load_novelty(gp, &gold)?;
            let pred_nov = load_novelty(pp, &pred)?;
            let source = NoveltySource::Precomputed {
                gold: &gold_nov,
                pred: &pred_nov,
            };
            evaluate(&gold, &pred, source, &options)?
        }
        _ => evaluate(&gold, &pred, NoveltySource::None, &options)?,
    };
    write_out(a.out.output.as_deref(), &emit_report(&evaluation, a.out.format))
}

fn run_retention(a: RetentionArgs) -> Result<()> {
    let (_, index) = train_index(&a.train, &a.input_opts, &a.policy)?;
    let eval = load(&a.eval, &a.input_opts, Role::Gold)?;
    let pred = retention(&index, &eval, a.gold_mentions);
    match &a.gold {
        Some(gold_path) => {
            if let Some(out) = &a.output {
                fs::write(out, to_span_json(&pred))?;
            }
            let gold = load(gold_path, &a.input_opts, Role::Gold)?;
            let evaluation = evaluate(&gold, &pred, NoveltySource::Index(&index), &EvaluationOptions::default())?;
            write_out(None, &emit_report(&evaluation, a.format))
        }
        None => write_out(a.output.as_deref(), &to_span_json(&pred)),
    }
}

fn swap_generate(a: SwapGenerateArgs) -> Result<()> {
    if a.relation.is_empty() {
        return Err(Error::UnsupportedFormat("empty relation type".into()));
    }
    let corpus = load(&a.input, &a.input_opts, Role::Gold)?;
    let mut spec = SwapSpec::new(a.relation);
    spec.require_same_etype = !a.allow_type_mismatch;
    let result = swap_corpus(&corpus, &spec)?;
    for s in &result.skipped {
        log::info!("skipped {}: {}", s.sent_id, s.reason.as_str());
    }
    write_out(a.output.as_deref(), &to_span_json(&result.swapped))?;
    if let Some(path) = &a.skipped {
        fs::write(path, emit_report(&SkipReport(result.skipped), OutputFormat::Json))?;
    }
    if let Some(path) = &a.remap {
        fs::write(path, to_json(&result.span_remap))?;
    }
    Ok(())
}

fn swap_eval(a: SwapEvalArgs) -> Result<()> {
    let gold = load(&a.gold, &a.input_opts, Role::Gold)?;
    let pred = load(&a.pred, &a.input_opts, Role::Prediction)?;
    let rows = a
        .relation
        .iter()
        .map(|r| evaluate_swap(&gold, &pred, r))
        .collect::<Result<Vec<_>>>()?;
    write_out(a.out.output.as_deref(), &emit_report(&SwapTable(rows), a.out.format))
}

fn stats(a: StatsArgs) -> Result<()> {
    let (train, index) = train_index(&a.train, &a.input_opts, &a.policy)?;
    let eval = load(&a.eval, &a.input_opts, Role::Gold)?;
    let report = stats_report(&index, &train, &eval)?;
    write_out(a.out.output.as_deref(), &emit_report(&report, a.out.format))
}
