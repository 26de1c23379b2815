//! End-to-end run: load a corpus, profile groups, attach significance
//! marks, compute the distance matrix and tree, and write a
//! deterministic report bundle.
//!
//! Table rows follow the source-label convention: documents whose
//! `source_label` equals the configured human label (default
//! `original`) appear per author, every other source label appears as
//! one concatenated group, and a final aggregate row concatenates all
//! human-labeled documents. The automatic dagger baselines are the two
//! non-human source labels when exactly two exist; `baseline1` /
//! `baseline2` override this.

use crate::composite::{self, CompositeDefinition, CompositeError};
use crate::corpus::{self, Corpus, CorpusError, SummaryRow};
use crate::distance::{self, DistanceError, DistanceMatrix, FrequencyVector};
use crate::lexicon::{self, Lexicon, LexiconError};
use crate::metrics::{self, MetricsError, StyleProfile};
use crate::report::{self, Measure, ReportError, StyleTable, TableFormat};
use crate::stats::{self, SignificanceMarks, StatsError, TVariant};
use crate::tokenizer::AbbreviationList;
use crate::tree::{self, SvgOptions, TreeError};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default source label marking human-authored documents.
pub const DEFAULT_HUMAN_LABEL: &str = "original";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Composite(#[from] CompositeError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("baseline '{0}' matches no table row (source label or author)")]
    UnknownBaseline(String),
    #[error("{path}: i/o failure")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Everything a run needs. Paths to lexicon/composite directories fall
/// back to the embedded default packs when absent.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineConfig {
    pub manifest: PathBuf,
    pub lexicon_dir: Option<PathBuf>,
    pub composite_dir: Option<PathBuf>,
    /// Extra abbreviation stop-list entries, added to the shipped list.
    pub abbreviations: Option<PathBuf>,
    pub alpha: f64,
    pub human_label: String,
    pub baseline1: Option<String>,
    pub baseline2: Option<String>,
    pub pooled_t_test: bool,
    pub svg_highlight: bool,
}

impl PipelineConfig {
    pub fn new(manifest: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            manifest: manifest.into(),
            lexicon_dir: None,
            composite_dir: None,
            abbreviations: None,
            alpha: stats::DEFAULT_ALPHA,
            human_label: DEFAULT_HUMAN_LABEL.to_string(),
            baseline1: None,
            baseline2: None,
            pooled_t_test: false,
            svg_highlight: true,
        }
    }

    pub fn t_variant(&self) -> TVariant {
        if self.pooled_t_test {
            TVariant::Pooled
        } else {
            TVariant::Welch
        }
    }
}

/// Loaded inputs shared by every subcommand.
pub struct Inputs {
    pub corpus: Corpus,
    pub lexicons: Vec<Lexicon>,
    pub composites: Vec<CompositeDefinition<f64>>,
}

pub fn load_inputs(config: &PipelineConfig) -> Result<Inputs, PipelineError> {
    let mut abbreviations = AbbreviationList::default();
    if let Some(path) = &config.abbreviations {
        let text = std::fs::read_to_string(path).map_err(|source| PipelineError::Io {
            path: path.clone(),
            source,
        })?;
        abbreviations.extend_from(&text);
    }
    let corpus = corpus::load_corpus_with(&config.manifest, &abbreviations)?;
    let lexicons = match &config.lexicon_dir {
        Some(dir) => lexicon::load_dir(dir)?,
        None => lexicon::default_pack(),
    };
    let composites = match &config.composite_dir {
        Some(dir) => composite::load_dir(dir)?,
        None => composite::default_pack(),
    };
    Ok(Inputs {
        corpus,
        lexicons,
        composites,
    })
}

/// Label for an (author, source) group: bare author for human-labeled
/// documents, `author-label` otherwise.
fn group_label(author: &str, source: &str, human_label: &str) -> String {
    if source == human_label {
        author.to_string()
    } else {
        format!("{author}-{source}")
    }
}

/// Table-1-style rows: one per (author, source) group, sorted by label.
pub fn summary_rows(
    corpus: &Corpus,
    human_label: &str,
) -> Result<Vec<SummaryRow<f64>>, PipelineError> {
    let groups = corpus::group_by_with(corpus, |meta| {
        group_label(&meta.author, &meta.source_label, human_label)
    });
    let mut rows = Vec::with_capacity(groups.len());
    for group in &groups {
        rows.push(corpus::corpus_summary(group)?);
    }
    Ok(rows)
}

pub fn render_summary_markdown(rows: &[SummaryRow<f64>]) -> String {
    let mut out = String::from("### Corpus summary\n\n");
    out.push_str("| | Number | Tokens | Types | Mean length |\n");
    out.push_str("|---|---:|---:|---:|---:|\n");
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {:.1} |\n",
            r.key, r.count, r.token_count, r.type_count, r.mean_length
        ));
    }
    out
}

pub fn render_summary_csv(rows: &[SummaryRow<f64>]) -> String {
    let mut out = String::from("subject,count,tokens,types,mean_length\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&r.key),
            r.count,
            r.token_count,
            r.type_count,
            r.mean_length
        ));
    }
    out
}

fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// One table row with everything needed for significance marks.
#[derive(Debug)]
pub struct StyleRow {
    /// Concatenation profile shown in the table.
    pub profile: StyleProfile<f64>,
    /// Per-document profiles, for the t-tested columns.
    pub per_document: Vec<StyleProfile<f64>>,
}

/// The style-table rows plus baseline indices (dagger, double dagger).
#[derive(Debug)]
pub struct StyleRows {
    pub rows: Vec<StyleRow>,
    pub baseline1: Option<usize>,
    pub baseline2: Option<usize>,
}

/// Build the table rows: non-human source-label groups first, then human
/// authors, then the aggregate human row.
pub fn style_rows(
    inputs: &Inputs,
    config: &PipelineConfig,
) -> Result<StyleRows, PipelineError> {
    let corpus = &inputs.corpus;
    if corpus.is_empty() {
        return Err(MetricsError::EmptyText.into());
    }
    let human = &config.human_label;

    let mut non_human_labels: Vec<String> = corpus
        .documents()
        .iter()
        .map(|d| d.meta.source_label.clone())
        .filter(|l| l != human)
        .collect();
    non_human_labels.sort();
    non_human_labels.dedup();

    let mut keyed: Vec<(String, Vec<usize>)> = Vec::new();
    for label in &non_human_labels {
        let docs: Vec<usize> = corpus
            .documents()
            .iter()
            .enumerate()
            .filter(|(_, d)| &d.meta.source_label == label)
            .map(|(i, _)| i)
            .collect();
        keyed.push((label.clone(), docs));
    }
    let mut human_authors: Vec<String> = corpus
        .documents()
        .iter()
        .filter(|d| &d.meta.source_label == human)
        .map(|d| d.meta.author.clone())
        .collect();
    human_authors.sort();
    human_authors.dedup();
    for author in &human_authors {
        let docs: Vec<usize> = corpus
            .documents()
            .iter()
            .enumerate()
            .filter(|(_, d)| &d.meta.author == author && &d.meta.source_label == human)
            .map(|(i, _)| i)
            .collect();
        keyed.push((author.clone(), docs));
    }
    if !human_authors.is_empty() {
        let docs: Vec<usize> = corpus
            .documents()
            .iter()
            .enumerate()
            .filter(|(_, d)| &d.meta.source_label == human)
            .map(|(i, _)| i)
            .collect();
        keyed.push((format!("{human} (all)"), docs));
    }

    let rows: Result<Vec<StyleRow>, PipelineError> = keyed
        .par_iter()
        .map(|(key, doc_indices)| {
            let docs: Vec<&corpus::Document> = doc_indices
                .iter()
                .map(|&i| &corpus.documents()[i])
                .collect();
            let mut tokens = Vec::new();
            let mut sentences = Vec::new();
            for d in &docs {
                let offset = tokens.len();
                tokens.extend(d.tokens.iter().cloned());
                sentences.extend(d.sentences.iter().map(|s| crate::tokenizer::SentenceSpan {
                    start_token: s.start_token + offset,
                    end_token: s.end_token + offset,
                }));
            }
            let profile = metrics::profile_tokens(
                key,
                &tokens,
                &sentences,
                &inputs.lexicons,
                &inputs.composites,
            )?;
            let per_document = docs
                .iter()
                .map(|d| metrics::profile_document(d, &inputs.lexicons, &inputs.composites))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(StyleRow {
                profile,
                per_document,
            })
        })
        .collect();
    let rows = rows?;

    let find_label = |label: &str| -> Option<usize> {
        rows.iter().position(|r| r.profile.subject == label)
    };
    let (baseline1, baseline2) = match (&config.baseline1, &config.baseline2) {
        (None, None) => {
            if non_human_labels.len() <= 2 {
                let mut it = non_human_labels.iter();
                (
                    it.next().and_then(|l| find_label(l)),
                    it.next().and_then(|l| find_label(l)),
                )
            } else {
                (None, None)
            }
        }
        (b1, b2) => {
            let resolve = |b: &Option<String>| -> Result<Option<usize>, PipelineError> {
                match b {
                    None => Ok(None),
                    Some(label) => find_label(label)
                        .map(Some)
                        .ok_or_else(|| PipelineError::UnknownBaseline(label.clone())),
                }
            };
            (resolve(b1)?, resolve(b2)?)
        }
    };
    Ok(StyleRows {
        rows,
        baseline1,
        baseline2,
    })
}

/// Marks for every row/column against the configured baselines. A test
/// that cannot run (single-document group, zero variance) yields no mark.
pub fn compute_marks(
    rows: &StyleRows,
    columns: &[Measure],
    alpha: f64,
    variant: TVariant,
) -> Vec<Vec<SignificanceMarks>> {
    let significant = |row: usize, baseline: Option<usize>, col: &Measure| -> bool {
        let Some(b) = baseline else { return false };
        if b == row {
            return false;
        }
        let r = &rows.rows[row];
        let base = &rows.rows[b];
        match col {
            Measure::MeanWordLength | Measure::MeanSentenceLength | Measure::Composite(_) => {
                let value = |p: &StyleProfile<f64>| -> Option<f64> {
                    match col {
                        Measure::MeanWordLength => Some(p.complexity.mean_word_length),
                        Measure::MeanSentenceLength => Some(p.complexity.mean_sentence_length),
                        Measure::Composite(name) => p.composites.get(name).copied(),
                        _ => unreachable!(),
                    }
                };
                let a: Option<Vec<f64>> = r.per_document.iter().map(value).collect();
                let bvals: Option<Vec<f64>> = base.per_document.iter().map(value).collect();
                match (a, bvals) {
                    (Some(a), Some(bvals)) => {
                        stats::t_test_two_sample_with(&a, &bvals, alpha, variant)
                            .map(|t| t.significant)
                            .unwrap_or(false)
                    }
                    _ => false,
                }
            }
            Measure::BigWordPct | Measure::CategoryPct(_) => {
                let counts = |p: &StyleProfile<f64>| -> Option<(u64, u64)> {
                    match col {
                        Measure::BigWordPct => Some((
                            p.complexity.big_word_count as u64,
                            p.complexity.token_count as u64,
                        )),
                        Measure::CategoryPct(name) => p
                            .categories
                            .hits(name)
                            .map(|h| (h, p.categories.total_tokens())),
                        _ => unreachable!(),
                    }
                };
                match (counts(&r.profile), counts(&base.profile)) {
                    (Some((ha, na)), Some((hb, nb))) => {
                        stats::proportion_test::<f64>(ha, na, hb, nb, alpha)
                            .map(|t| t.significant)
                            .unwrap_or(false)
                    }
                    _ => false,
                }
            }
        }
    };

    (0..rows.rows.len())
        .map(|i| {
            columns
                .iter()
                .map(|col| SignificanceMarks {
                    vs_baseline_1: significant(i, rows.baseline1, col),
                    vs_baseline_2: significant(i, rows.baseline2, col),
                })
                .collect()
        })
        .collect()
}

/// Build one of the standard style tables (rows already ordered).
pub fn build_style_table(
    title: &str,
    rows: &StyleRows,
    columns: &[Measure],
    alpha: f64,
    variant: TVariant,
) -> Result<StyleTable<f64>, PipelineError> {
    let marks = compute_marks(rows, columns, alpha, variant);
    let profiles: Vec<StyleProfile<f64>> =
        rows.rows.iter().map(|r| r.profile.clone()).collect();
    let mut table = report::build_table(title, &profiles, columns, Some(&marks))?;
    table.caption = Some(concat!(
        "Group values are computed over the concatenated member documents; ",
        "mean word length, mean sentence length, and composite columns are ",
        "dagger-tested on per-document values, percentage columns on ",
        "concatenation counts."
    )
    .to_string());
    Ok(table)
}

/// The pronoun-style category columns, in the conventional order,
/// restricted to loaded lexicons.
pub fn pronoun_columns(lexicons: &[Lexicon]) -> Vec<Measure> {
    const ORDER: [&str; 6] = ["Self", "We", "You", "SheHe", "They", "Ipron"];
    ORDER
        .iter()
        .filter(|name| lexicons.iter().any(|l| l.name() == **name))
        .map(|name| Measure::CategoryPct(name.to_string()))
        .collect()
}

/// Every remaining category, sorted, as semantic columns.
pub fn semantic_columns(lexicons: &[Lexicon]) -> Vec<Measure> {
    const PRONOUNS: [&str; 6] = ["Self", "We", "You", "SheHe", "They", "Ipron"];
    let mut names: Vec<&str> = lexicons
        .iter()
        .map(|l| l.name())
        .filter(|n| !PRONOUNS.contains(n))
        .collect();
    names.sort_unstable();
    names
        .into_iter()
        .map(|n| Measure::CategoryPct(n.to_string()))
        .collect()
}

pub fn composite_columns(composites: &[CompositeDefinition<f64>]) -> Vec<Measure> {
    composites
        .iter()
        .map(|c| Measure::Composite(c.name().to_string()))
        .collect()
}

/// The (label, frequency vector) list behind the distance matrix: one
/// entry per (author, source) group.
pub fn distance_texts(
    corpus: &Corpus,
    human_label: &str,
) -> Vec<(String, FrequencyVector)> {
    let groups = corpus::group_by_with(corpus, |meta| {
        group_label(&meta.author, &meta.source_label, human_label)
    });
    groups
        .iter()
        .map(|g| {
            (
                g.key().to_string(),
                FrequencyVector::from_tokens(g.concatenated_tokens()),
            )
        })
        .collect()
}

/// Output of a full pipeline run.
#[derive(Debug)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub notes: Vec<String>,
}

/// Run everything and write the bundle. All content is computed before
/// anything is written; each file then lands via temp-file-and-rename.
pub fn run_pipeline(config: &PipelineConfig, out_dir: &Path) -> Result<RunOutput, PipelineError> {
    let inputs = load_inputs(config)?;
    if inputs.corpus.is_empty() {
        return Err(MetricsError::EmptyText.into());
    }
    let mut notes: Vec<String> = Vec::new();
    let mut bundle: Vec<(&str, String)> = Vec::new();

    // corpus summary
    let rows = summary_rows(&inputs.corpus, &config.human_label)?;
    bundle.push(("summary.md", render_summary_markdown(&rows)));
    bundle.push(("summary.csv", render_summary_csv(&rows)));

    // style tables
    let style = style_rows(&inputs, config)?;
    let variant = config.t_variant();
    let complexity_columns = vec![
        Measure::MeanWordLength,
        Measure::BigWordPct,
        Measure::MeanSentenceLength,
    ];
    let tables: Vec<(&str, &str, Vec<Measure>)> = vec![
        ("complexity", "Language complexity", complexity_columns),
        ("pronouns", "Pronoun categories", pronoun_columns(&inputs.lexicons)),
        ("semantic", "Semantic categories", semantic_columns(&inputs.lexicons)),
        ("composites", "Composite measures", composite_columns(&inputs.composites)),
    ];
    let mut table_files: Vec<(String, String)> = Vec::new();
    for (stem, title, columns) in tables {
        if columns.is_empty() {
            notes.push(format!("table '{stem}' skipped: no matching columns"));
            continue;
        }
        let table = build_style_table(title, &style, &columns, config.alpha, variant)?;
        table_files.push((
            format!("{stem}.md"),
            report::render_table(&table, TableFormat::Markdown),
        ));
        table_files.push((
            format!("{stem}.csv"),
            report::render_table(&table, TableFormat::Csv),
        ));
    }

    // distance matrix and tree
    let texts = distance_texts(&inputs.corpus, &config.human_label);
    let matrix: DistanceMatrix<f64> = distance::distance_matrix(&texts)?;
    bundle.push(("distance_matrix.csv", matrix.to_csv()));
    bundle.push(("distance_pairs.csv", matrix.to_long_csv()));

    let mut tree_files: Vec<(&str, String)> = Vec::new();
    if matrix.len() >= 3 {
        let tree = tree::neighbor_joining(&matrix)?;
        if tree.clamped_branch_count() > 0 {
            notes.push(format!(
                "{} negative branch estimate(s) clamped to zero",
                tree.clamped_branch_count()
            ));
        }
        let tree = tree::layout_equal_angle(tree);
        tree_files.push(("tree.nwk", format!("{}\n", tree.to_newick())));
        tree_files.push(("tree.dot", tree::to_dot(&tree)));
        let svg_options = SvgOptions {
            highlight_internal: config.svg_highlight,
            ..SvgOptions::default()
        };
        tree_files.push(("tree.svg", tree::to_svg(&tree, &svg_options)?));
    } else {
        notes.push("tree skipped: fewer than 3 labeled groups".to_string());
    }

    // run manifest: tool version, config, input hashes, notes
    let manifest_json = run_manifest(config, &inputs, &notes)?;

    // everything computed; now write
    std::fs::create_dir_all(out_dir).map_err(|source| PipelineError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for (name, content) in bundle
        .into_iter()
        .map(|(n, c)| (n.to_string(), c))
        .chain(table_files)
        .chain(tree_files.into_iter().map(|(n, c)| (n.to_string(), c)))
        .chain(std::iter::once(("run_manifest.json".to_string(), manifest_json)))
    {
        let path = out_dir.join(&name);
        write_atomic(&path, content.as_bytes())?;
        files.push(path);
    }
    files.sort();
    Ok(RunOutput { files, notes })
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

fn run_manifest(
    config: &PipelineConfig,
    inputs: &Inputs,
    notes: &[String],
) -> Result<String, PipelineError> {
    let read = |path: &Path| -> Result<Vec<u8>, PipelineError> {
        std::fs::read(path).map_err(|source| PipelineError::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    let mut input_hashes = BTreeMap::new();
    input_hashes.insert(
        config.manifest.display().to_string(),
        sha256_hex(&read(&config.manifest)?),
    );
    for doc in inputs.corpus.documents() {
        input_hashes.insert(
            doc.meta.path.display().to_string(),
            sha256_hex(doc.raw_text.as_bytes()),
        );
    }
    let config_json = serde_json::to_string(config).expect("config serializes");

    #[derive(Serialize)]
    struct RunManifest<'a> {
        tool_version: &'a str,
        config: &'a PipelineConfig,
        config_sha256: String,
        input_sha256: BTreeMap<String, String>,
        documents: usize,
        lexicon_categories: Vec<&'a str>,
        composites: Vec<&'a str>,
        notes: &'a [String],
    }
    let manifest = RunManifest {
        tool_version: TOOL_VERSION,
        config,
        config_sha256: sha256_hex(config_json.as_bytes()),
        input_sha256: input_hashes,
        documents: inputs.corpus.len(),
        lexicon_categories: inputs.lexicons.iter().map(|l| l.name()).collect(),
        composites: inputs.composites.iter().map(|c| c.name()).collect(),
        notes,
    };
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&manifest).expect("manifest serializes")
    ))
}

/// Write via a sibling temp file and rename, so failures leave no
/// partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let io_err = |source: std::io::Error| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
