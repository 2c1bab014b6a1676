//! Command line surface. Every command builds its complete output set
//! in memory first, so a failing run never leaves partial files
//! behind.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cortex_core::eval::{self, ReferenceExtract};
use cortex_core::{
    summarize_generic, CompressionSpec, CompressionUnit, PreprocessedDocument,
};

use crate::input::load_corpus;
use crate::parallel::parallel_map;
use crate::qaas::{self, QaasParams, SummarizerKind};
use crate::render;
use crate::resources::{self, ResourcePack, Resources};

#[derive(Parser)]
#[command(
    name = "cortex",
    version,
    about = "Extractive summarization over term-sentence matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Condense each input document into a generic extract.
    Summarize(SummarizeArgs),
    /// Answer questions from a corpus via query-biased extracts.
    Qaas(QaasArgs),
    /// Metric sensitivity statistics across a corpus.
    Analyze(AnalyzeArgs),
    /// Score a saved extract against a reference extract.
    Eval(EvalArgs),
    /// Verify that sentence order cannot change any decision score.
    ShuffleTest(ShuffleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    Fr,
    En,
}

impl Lang {
    fn pack(self) -> &'static ResourcePack {
        match self {
            Lang::Fr => &resources::FRENCH,
            Lang::En => &resources::ENGLISH,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Delete number words during normalization.
    Generic,
    /// Keep number words; they often carry the answer.
    Qa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Unit {
    Sentences,
    Words,
}

impl Unit {
    fn to_core(self) -> CompressionUnit {
        match self {
            Unit::Sentences => CompressionUnit::Sentences,
            Unit::Words => CompressionUnit::Words,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Summarizer {
    /// Query-biased scoring plus a corpus-wide re-ranking pass.
    Personalized,
    /// Plain per-document extracts merged by score.
    Generic,
}

#[derive(Args)]
struct ResourceArgs {
    /// Built-in resource set to start from.
    #[arg(long, value_enum, default_value_t = Lang::Fr)]
    lang: Lang,
    /// Replace the built-in stoplist.
    #[arg(long, value_name = "FILE")]
    stoplist: Option<PathBuf>,
    /// Replace the built-in lemma table.
    #[arg(long, value_name = "FILE")]
    lemmas: Option<PathBuf>,
    /// Replace the built-in thesaurus.
    #[arg(long, value_name = "FILE")]
    thesaurus: Option<PathBuf>,
}

impl ResourceArgs {
    fn load(&self, mode: Mode) -> Result<Resources> {
        resources::load(
            self.lang.pack(),
            matches!(mode, Mode::Qa),
            self.stoplist.as_deref(),
            self.lemmas.as_deref(),
            self.thesaurus.as_deref(),
        )
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for the output files; stdout when absent.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for preprocessing and question answering.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Input files or directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Extract size as a percentage of each document (1-100).
    #[arg(long, default_value_t = 25)]
    tau: u32,
    /// What the percentage counts.
    #[arg(long, value_enum, default_value_t = Unit::Sentences)]
    unit: Unit,
    #[arg(long, value_enum, default_value_t = Mode::Generic)]
    mode: Mode,
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct QaasArgs {
    /// Question file: one question per line, optional TAB-separated
    /// gold answers.
    #[arg(long, value_name = "FILE")]
    questions: PathBuf,
    /// Corpus file or directory.
    #[arg(long, value_name = "PATH")]
    corpus: PathBuf,
    /// Gold answer file: question id, TAB, one answer per field.
    #[arg(long, value_name = "FILE")]
    gold: Option<PathBuf>,
    /// Extract size per document (1-100).
    #[arg(long, default_value_t = 30)]
    tau: u32,
    #[arg(long, value_enum, default_value_t = Unit::Sentences)]
    unit: Unit,
    #[arg(long, value_enum, default_value_t = Mode::Qa)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Summarizer::Personalized)]
    summarizer: Summarizer,
    /// Documents retrieved per question; whole corpus when absent.
    #[arg(long, value_name = "N")]
    docs: Option<usize>,
    /// Candidate sentences listed per question.
    #[arg(long, default_value_t = 5)]
    candidates: usize,
    /// Require a candidate to equal a gold answer, not just contain
    /// it.
    #[arg(long)]
    exact_answers: bool,
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input files or directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Generic)]
    mode: Mode,
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// Extract JSON written by `summarize --format json`.
    extract: PathBuf,
    /// Reference extract: one `sentence-index [TAB weight]` per line.
    reference: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ShuffleArgs {
    /// Input files or directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Permutation seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Generic)]
    mode: Mode,
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

pub fn main_entry() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Summarize(args) => {
            let files = cmd_summarize(&args)?;
            deliver(&files, args.output.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Qaas(args) => {
            let files = cmd_qaas(&args)?;
            deliver(&files, args.output.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze(args) => {
            let files = cmd_analyze(&args)?;
            deliver(&files, args.output.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval(args) => {
            let files = cmd_eval(&args)?;
            deliver(&files, args.output.out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ShuffleTest(args) => {
            let (files, passed) = cmd_shuffle(&args)?;
            deliver(&files, args.output.out.as_deref())?;
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

struct OutFile {
    name: String,
    content: String,
}

/// Write the files into the output directory, or print them to stdout
/// with `==> name <==` separators when there are several.
fn deliver(files: &[OutFile], out: Option<&Path>) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("cannot create {}", dir.display()))?;
            for file in files {
                let path = dir.join(&file.name);
                fs::write(&path, &file.content)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
        }
        None => {
            // A closed pipe (`cortex ... | head`) is a reader that has
            // seen enough, not an error.
            let mut stdout = io::stdout().lock();
            let single = files.len() == 1;
            for (k, file) in files.iter().enumerate() {
                let banner = if single {
                    String::new()
                } else if k > 0 {
                    format!("\n==> {} <==\n", file.name)
                } else {
                    format!("==> {} <==\n", file.name)
                };
                let write = stdout
                    .write_all(banner.as_bytes())
                    .and_then(|_| stdout.write_all(file.content.as_bytes()));
                match write {
                    Err(err) if err.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
                    other => other.context("cannot write to stdout")?,
                }
            }
        }
    }
    Ok(())
}

/// Document ids become file names; anything risky becomes '_'.
fn safe_name(id: &str) -> String {
    id.chars()
        .map(|ch| {
            if ch.is_alphanumeric() || matches!(ch, '.' | '-' | '_') {
                ch
            } else {
                '_'
            }
        })
        .collect()
}

fn cmd_summarize(args: &SummarizeArgs) -> Result<Vec<OutFile>> {
    let resources = args.resources.load(args.mode)?;
    let spec = CompressionSpec::new(args.tau, args.unit.to_core())?;
    let docs = load_corpus(&args.inputs, &resources.config, args.output.workers)?;

    let mut files: Vec<render::SummaryFile> = Vec::with_capacity(docs.len());
    for doc in &docs {
        let summary = summarize_generic(doc, spec)
            .with_context(|| format!("cannot summarize '{}'", doc.source_id))?;
        files.push(render::summary_file(doc, &summary, "generic"));
    }

    Ok(match args.output.format {
        Format::Text => files
            .iter()
            .map(|file| OutFile {
                name: format!("{}.txt", safe_name(&file.doc_id)),
                content: render::summary_text(file),
            })
            .collect(),
        Format::Json => vec![OutFile {
            name: "extracts.json".to_string(),
            content: render::to_json(&files)?,
        }],
        Format::Csv => vec![OutFile {
            name: "extracts.csv".to_string(),
            content: render::summaries_csv(&files),
        }],
    })
}

fn cmd_qaas(args: &QaasArgs) -> Result<Vec<OutFile>> {
    let resources = args.resources.load(args.mode)?;
    let spec = CompressionSpec::new(args.tau, args.unit.to_core())?;
    if args.candidates == 0 {
        bail!("--candidates must be at least 1");
    }
    let (questions, mut gold) = qaas::read_questions(&args.questions)?;
    if let Some(path) = &args.gold {
        qaas::read_gold(path, &mut gold)?;
    }
    let corpus = [args.corpus.clone()];
    let docs = load_corpus(&corpus, &resources.config, args.output.workers)?;

    let params = QaasParams {
        spec,
        summarizer: match args.summarizer {
            Summarizer::Personalized => SummarizerKind::Personalized,
            Summarizer::Generic => SummarizerKind::Generic,
        },
        r_docs: args.docs,
        max_candidates: args.candidates,
        exact_answers: args.exact_answers,
    };
    let report = qaas::run(
        &docs,
        &questions,
        &gold,
        &resources.thesaurus,
        &resources.config,
        &params,
        args.output.workers,
    )?;
    let file = render::qaas_file(&report, params.summarizer, spec);

    Ok(vec![match args.output.format {
        Format::Text => OutFile {
            name: "qaas.txt".to_string(),
            content: render::qaas_text(&file),
        },
        Format::Json => OutFile {
            name: "qaas.json".to_string(),
            content: render::to_json(&file)?,
        },
        Format::Csv => OutFile {
            name: "qaas.csv".to_string(),
            content: render::qaas_csv(&file),
        },
    }])
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<Vec<OutFile>> {
    let resources = args.resources.load(args.mode)?;
    let docs = load_corpus(&args.inputs, &resources.config, args.output.workers)?;
    let report = eval::sensitivity(&docs)?;
    let file = render::analyze_file(&report);

    Ok(match args.output.format {
        Format::Text => vec![OutFile {
            name: "analysis.txt".to_string(),
            content: render::analyze_text(&file),
        }],
        Format::Json => vec![OutFile {
            name: "analysis.json".to_string(),
            content: render::to_json(&file)?,
        }],
        Format::Csv => vec![
            OutFile {
                name: "metrics.csv".to_string(),
                content: render::metrics_csv(&docs)?,
            },
            OutFile {
                name: "sensitivity.csv".to_string(),
                content: render::sensitivity_csv(&file),
            },
            OutFile {
                name: "histograms.csv".to_string(),
                content: render::histograms_csv(&file),
            },
        ],
    })
}

fn cmd_eval(args: &EvalArgs) -> Result<Vec<OutFile>> {
    let extract_text = fs::read_to_string(&args.extract)
        .with_context(|| format!("cannot read {}", args.extract.display()))?;
    let mut extracts = render::from_json_summaries(&extract_text)
        .with_context(|| format!("cannot parse {}", args.extract.display()))?;
    if extracts.len() != 1 {
        bail!(
            "{} holds {} extracts; evaluation needs exactly one",
            args.extract.display(),
            extracts.len()
        );
    }
    let extract = extracts.remove(0);
    let mut selected = BTreeSet::new();
    for entry in &extract.entries {
        if entry.doc_id != extract.doc_id {
            bail!(
                "extract for '{}' holds a sentence from '{}'",
                extract.doc_id,
                entry.doc_id
            );
        }
        if entry.sentence >= extract.sentences_total {
            bail!(
                "sentence index {} out of range (document has {})",
                entry.sentence,
                extract.sentences_total
            );
        }
        selected.insert(entry.sentence);
    }

    let reference = read_reference(&args.reference, extract.sentences_total)?;
    let pr = eval::precision_recall(&selected, &reference.selected)?;
    let quality = eval::quality(&selected, &reference);
    let file = render::EvalFile {
        doc_id: extract.doc_id.clone(),
        extract_size: selected.len(),
        reference_size: reference.selected.len(),
        precision: pr.precision,
        recall: pr.recall,
        empty_extract: pr.empty_extract,
        quality_raw: quality.raw,
        quality_normalized: quality.normalized,
    };

    Ok(vec![match args.output.format {
        Format::Text => OutFile {
            name: "eval.txt".to_string(),
            content: render::eval_text(&file),
        },
        Format::Json => OutFile {
            name: "eval.json".to_string(),
            content: render::to_json(&file)?,
        },
        Format::Csv => OutFile {
            name: "eval.csv".to_string(),
            content: render::eval_csv(&file),
        },
    }])
}

/// Reference extract file: `sentence-index [TAB weight]` per line,
/// weight 1 when absent. Indices must fit the evaluated document.
fn read_reference(path: &Path, sentences_total: usize) -> Result<ReferenceExtract> {
    let content = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut weights = vec![0.0; sentences_total];
    let mut selected = BTreeSet::new();
    for (number, line) in content.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let index: usize = fields
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .with_context(|| {
                format!("{} line {}: bad sentence index", path.display(), number + 1)
            })?;
        let weight: f64 = match fields.next() {
            Some(field) => field.trim().parse().with_context(|| {
                format!("{} line {}: bad weight", path.display(), number + 1)
            })?,
            None => 1.0,
        };
        if index >= sentences_total {
            bail!(
                "{} line {}: sentence index {} out of range (document has {})",
                path.display(),
                number + 1,
                index,
                sentences_total
            );
        }
        if !weight.is_finite() || weight < 0.0 {
            bail!(
                "{} line {}: weight must be finite and non-negative",
                path.display(),
                number + 1
            );
        }
        if !selected.insert(index) {
            bail!(
                "{} line {}: sentence {} listed twice",
                path.display(),
                number + 1,
                index
            );
        }
        weights[index] = weight;
    }
    Ok(ReferenceExtract { weights, selected })
}

fn cmd_shuffle(args: &ShuffleArgs) -> Result<(Vec<OutFile>, bool)> {
    let resources = args.resources.load(args.mode)?;
    let docs = load_corpus(&args.inputs, &resources.config, args.output.workers)?;
    let reports: Vec<(String, usize, eval::ShuffleReport)> =
        parallel_map(&docs, args.output.workers, |doc: &PreprocessedDocument| {
            eval::shuffle_test(doc, args.seed)
                .map(|report| (doc.source_id.clone(), doc.sentences.len(), report))
                .with_context(|| format!("cannot score '{}'", doc.source_id))
        })
        .into_iter()
        .collect::<Result<_>>()?;
    let file = render::shuffle_file(args.seed, &reports);
    let passed = file.passed;

    let out = vec![match args.output.format {
        Format::Text => OutFile {
            name: "shuffle.txt".to_string(),
            content: render::shuffle_text(&file),
        },
        Format::Json => OutFile {
            name: "shuffle.json".to_string(),
            content: render::to_json(&file)?,
        },
        Format::Csv => OutFile {
            name: "shuffle.csv".to_string(),
            content: render::shuffle_csv(&file),
        },
    }];
    Ok((out, passed))
}
