//! Language complexity measures and the per-subject style profile.

use crate::composite::{CompositeDefinition, CompositeError};
use crate::corpus::{CorpusGroup, Document};
use crate::lexicon::{self, CategoryCounts, Lexicon, LexiconError};
use crate::scalar::Real;
use crate::tokenizer::{SentenceSpan, WordToken};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("cannot profile an empty text")]
    EmptyText,
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Composite(#[from] CompositeError),
}

/// The three complexity measures plus their underlying counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityProfile<R: Real = f64> {
    /// Mean letters per word.
    pub mean_word_length: R,
    /// Percentage of words with six letters or more.
    pub big_word_pct: R,
    /// Mean words per sentence.
    pub mean_sentence_length: R,
    pub token_count: usize,
    pub sentence_count: usize,
    pub big_word_count: usize,
}

/// Compute the complexity measures over one token/sentence view.
pub fn complexity<R: Real>(
    tokens: &[WordToken],
    sentences: &[SentenceSpan],
) -> Result<ComplexityProfile<R>, MetricsError> {
    if tokens.is_empty() || sentences.is_empty() {
        return Err(MetricsError::EmptyText);
    }
    let letter_total: usize = tokens.iter().map(|t| t.letter_count).sum();
    let big_word_count = tokens.iter().filter(|t| t.is_big_word()).count();
    let token_count = tokens.len();
    let sentence_count = sentences.len();
    Ok(ComplexityProfile {
        mean_word_length: R::from_count(letter_total) / R::from_count(token_count),
        big_word_pct: R::c(100.0) * R::from_count(big_word_count) / R::from_count(token_count),
        mean_sentence_length: R::from_count(token_count) / R::from_count(sentence_count),
        token_count,
        sentence_count,
        big_word_count,
    })
}

/// Every per-subject measurement: complexity, category percentages, and
/// composite scores.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleProfile<R: Real = f64> {
    /// Document id or group key this profile describes.
    pub subject: String,
    pub complexity: ComplexityProfile<R>,
    pub categories: CategoryCounts,
    pub composites: BTreeMap<String, R>,
}

/// Profile one token/sentence view against lexicons and composite
/// definitions.
pub fn profile_tokens<R: Real>(
    subject: &str,
    tokens: &[WordToken],
    sentences: &[SentenceSpan],
    lexicons: &[Lexicon],
    composites: &[CompositeDefinition<R>],
) -> Result<StyleProfile<R>, MetricsError> {
    let complexity = complexity(tokens, sentences)?;
    let categories = lexicon::count_categories(tokens, lexicons)?;
    let mut scores = BTreeMap::new();
    for def in composites {
        scores.insert(def.name().to_string(), def.evaluate(&categories)?);
    }
    Ok(StyleProfile {
        subject: subject.to_string(),
        complexity,
        categories,
        composites: scores,
    })
}

/// Profile a single document.
pub fn profile_document<R: Real>(
    doc: &Document,
    lexicons: &[Lexicon],
    composites: &[CompositeDefinition<R>],
) -> Result<StyleProfile<R>, MetricsError> {
    profile_tokens(&doc.meta.id, &doc.tokens, &doc.sentences, lexicons, composites)
}

/// Profile a group over its concatenated token stream.
pub fn profile_group<R: Real>(
    group: &CorpusGroup<'_>,
    lexicons: &[Lexicon],
    composites: &[CompositeDefinition<R>],
) -> Result<StyleProfile<R>, MetricsError> {
    profile_tokens(
        group.key(),
        group.concatenated_tokens(),
        group.concatenated_sentences(),
        lexicons,
        composites,
    )
}
