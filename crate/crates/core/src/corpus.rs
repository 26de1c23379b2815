//! Manifest-described document sets with metadata, grouping, and
//! per-group summary statistics.
//!
//! The manifest is delimited UTF-8 text with the header
//! `id,author,year,source_label,path`; `path` resolves relative to the
//! manifest's directory. Text files are raw UTF-8 plain text and
//! decoding errors are hard failures.

use crate::scalar::Real;
use crate::tokenizer::{self, AbbreviationList, SentenceSpan, WordToken};
use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: cannot read manifest")]
    ManifestIo {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed manifest (row {row}): {message}")]
    MalformedManifest {
        path: PathBuf,
        row: usize,
        message: String,
    },
    #[error("duplicate document id '{id}'")]
    DuplicateId { id: String },
    #[error("{path}: referenced text file missing or unreadable")]
    MissingFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: not valid UTF-8")]
    Encoding { path: PathBuf },
    #[error("cannot summarize an empty group")]
    EmptyGroup,
}

/// Identity and provenance of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentMeta {
    pub id: String,
    pub author: String,
    pub year: i32,
    /// Distinguishes provenance, e.g. original transcripts vs. generated text.
    pub source_label: String,
    pub path: PathBuf,
}

/// One text with its token and sentence decomposition.
#[derive(Debug, Clone)]
pub struct Document {
    pub meta: DocumentMeta,
    pub raw_text: String,
    pub tokens: Vec<WordToken>,
    pub sentences: Vec<SentenceSpan>,
}

impl Document {
    pub fn new(meta: DocumentMeta, raw_text: String, abbreviations: &AbbreviationList) -> Self {
        let (tokens, sentences) = tokenizer::tokenize_with(&raw_text, abbreviations);
        Document {
            meta,
            raw_text,
            tokens,
            sentences,
        }
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }
}

/// An immutable set of documents loaded from one manifest.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    documents: Vec<Document>,
}

impl Corpus {
    pub fn from_documents(documents: Vec<Document>) -> Result<Self, CorpusError> {
        let mut ids = HashSet::new();
        for doc in &documents {
            if !ids.insert(doc.meta.id.clone()) {
                return Err(CorpusError::DuplicateId {
                    id: doc.meta.id.clone(),
                });
            }
        }
        Ok(Corpus { documents })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn total_tokens(&self) -> usize {
        self.documents.iter().map(|d| d.token_count()).sum()
    }
}

/// Load a manifest and every text file it references, tokenizing with the
/// shipped abbreviation stop-list.
pub fn load_corpus(manifest: &Path) -> Result<Corpus, CorpusError> {
    load_corpus_with(manifest, &AbbreviationList::default())
}

/// Load a manifest with a caller-supplied abbreviation stop-list.
pub fn load_corpus_with(
    manifest: &Path,
    abbreviations: &AbbreviationList,
) -> Result<Corpus, CorpusError> {
    let base = manifest.parent().unwrap_or_else(|| Path::new("."));
    let raw = std::fs::read(manifest).map_err(|source| CorpusError::ManifestIo {
        path: manifest.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(raw).map_err(|_| CorpusError::Encoding {
        path: manifest.to_path_buf(),
    })?;

    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| malformed(manifest, 1, e.to_string()))?
        .clone();
    let mut column = BTreeMap::new();
    for (i, h) in headers.iter().enumerate() {
        column.insert(h.to_string(), i);
    }
    let col = |name: &str| -> Result<usize, CorpusError> {
        column
            .get(name)
            .copied()
            .ok_or_else(|| malformed(manifest, 1, format!("missing required column '{name}'")))
    };
    let (c_id, c_author, c_year, c_label, c_path) = (
        col("id")?,
        col("author")?,
        col("year")?,
        col("source_label")?,
        col("path")?,
    );

    let mut documents = Vec::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 2; // header is row 1
        let record = record.map_err(|e| malformed(manifest, row, e.to_string()))?;
        let field = |c: usize| -> Result<&str, CorpusError> {
            record
                .get(c)
                .ok_or_else(|| malformed(manifest, row, "missing field".to_string()))
        };
        let id = field(c_id)?.to_string();
        if id.is_empty() {
            return Err(malformed(manifest, row, "empty id".to_string()));
        }
        if !seen_ids.insert(id.clone()) {
            return Err(CorpusError::DuplicateId { id });
        }
        let year_field = field(c_year)?;
        let year: i32 = year_field
            .parse()
            .map_err(|_| malformed(manifest, row, format!("invalid year '{year_field}'")))?;
        if year <= 0 {
            return Err(malformed(manifest, row, format!("year must be positive, got {year}")));
        }
        let rel = PathBuf::from(field(c_path)?);
        let path = if rel.is_absolute() { rel } else { base.join(rel) };
        let meta = DocumentMeta {
            id,
            author: field(c_author)?.to_string(),
            year,
            source_label: field(c_label)?.to_string(),
            path: path.clone(),
        };
        let bytes = std::fs::read(&path).map_err(|source| CorpusError::MissingFile {
            path: path.clone(),
            source,
        })?;
        let raw_text =
            String::from_utf8(bytes).map_err(|_| CorpusError::Encoding { path: path.clone() })?;
        documents.push(Document::new(meta, raw_text, abbreviations));
    }
    Ok(Corpus { documents })
}

fn malformed(path: &Path, row: usize, message: String) -> CorpusError {
    CorpusError::MalformedManifest {
        path: path.to_path_buf(),
        row,
        message,
    }
}

/// Built-in grouping rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    /// One group per document, keyed by id.
    Document,
    /// One group per author.
    Author,
    /// One group per (author, source label) pair, keyed `author-label`.
    AuthorSource,
}

impl GroupKey {
    pub fn key_for(&self, meta: &DocumentMeta) -> String {
        match self {
            GroupKey::Document => meta.id.clone(),
            GroupKey::Author => meta.author.clone(),
            GroupKey::AuthorSource => format!("{}-{}", meta.author, meta.source_label),
        }
    }
}

/// A keyed set of member documents plus their concatenated token stream.
#[derive(Debug, Clone)]
pub struct CorpusGroup<'a> {
    key: String,
    documents: Vec<&'a Document>,
    concatenated_tokens: Vec<WordToken>,
    concatenated_sentences: Vec<SentenceSpan>,
}

impl<'a> CorpusGroup<'a> {
    fn build(key: String, documents: Vec<&'a Document>) -> Self {
        let mut tokens = Vec::with_capacity(documents.iter().map(|d| d.token_count()).sum());
        let mut sentences = Vec::new();
        for doc in &documents {
            let offset = tokens.len();
            tokens.extend(doc.tokens.iter().cloned());
            sentences.extend(doc.sentences.iter().map(|s| SentenceSpan {
                start_token: s.start_token + offset,
                end_token: s.end_token + offset,
            }));
        }
        CorpusGroup {
            key,
            documents,
            concatenated_tokens: tokens,
            concatenated_sentences: sentences,
        }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn documents(&self) -> &[&'a Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Member token streams appended in corpus order.
    pub fn concatenated_tokens(&self) -> &[WordToken] {
        &self.concatenated_tokens
    }

    pub fn concatenated_sentences(&self) -> &[SentenceSpan] {
        &self.concatenated_sentences
    }
}

/// Partition the corpus with a custom key function; groups come back
/// sorted by key, documents inside a group in corpus order.
pub fn group_by_with<'a, F>(corpus: &'a Corpus, key_fn: F) -> Vec<CorpusGroup<'a>>
where
    F: Fn(&DocumentMeta) -> String,
{
    let mut buckets: BTreeMap<String, Vec<&Document>> = BTreeMap::new();
    for doc in corpus.documents() {
        buckets.entry(key_fn(&doc.meta)).or_default().push(doc);
    }
    buckets
        .into_iter()
        .map(|(key, documents)| CorpusGroup::build(key, documents))
        .collect()
}

/// Partition the corpus with one of the built-in rules.
pub fn group_by<'a>(corpus: &'a Corpus, key: GroupKey) -> Vec<CorpusGroup<'a>> {
    group_by_with(corpus, |meta| key.key_for(meta))
}

/// One row of the corpus overview table.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow<R: Real = f64> {
    pub key: String,
    /// Number of member documents.
    pub count: usize,
    /// Total word tokens over all members.
    pub token_count: usize,
    /// Distinct case-folded word forms over the concatenation.
    pub type_count: usize,
    /// Mean tokens per document.
    pub mean_length: R,
}

/// Count, tokens, types, and mean document length for one group.
pub fn corpus_summary<R: Real>(group: &CorpusGroup<'_>) -> Result<SummaryRow<R>, CorpusError> {
    if group.is_empty() {
        return Err(CorpusError::EmptyGroup);
    }
    let token_count = group.concatenated_tokens().len();
    let types: HashSet<&str> = group
        .concatenated_tokens()
        .iter()
        .map(|t| t.folded.as_str())
        .collect();
    Ok(SummaryRow {
        key: group.key().to_string(),
        count: group.len(),
        token_count,
        type_count: types.len(),
        mean_length: R::from_count(token_count) / R::from_count(group.len()),
    })
}
