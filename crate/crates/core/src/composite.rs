//! Composite summary scores on a 1-100 scale (Tone, Clout, Analytical,
//! Authenticity): affine combinations of category percentages, clamped.
//!
//! Definitions are data, not code. The shipped defaults are documented
//! reconstructions; the licensed LIWC formulas are unpublished.

use crate::lexicon::CategoryCounts;
use crate::scalar::Real;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const SCORE_MIN: f64 = 1.0;
pub const SCORE_MAX: f64 = 100.0;

/// Shipped composite definitions as `(file name, file contents)`.
pub const DEFAULT_COMPOSITE_SOURCES: [(&str, &str); 4] = [
    ("tone.cmp", include_str!("../data/composites/tone.cmp")),
    ("clout.cmp", include_str!("../data/composites/clout.cmp")),
    ("analytical.cmp", include_str!("../data/composites/analytical.cmp")),
    (
        "authenticity.cmp",
        include_str!("../data/composites/authenticity.cmp"),
    ),
];

#[derive(Debug, Error)]
pub enum CompositeError {
    #[error("{path}: cannot read composite definition")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}:{line}: malformed composite definition: {message}")]
    Malformed {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("{origin}: composite definition has no terms")]
    NoTerms { origin: String },
    #[error("{origin}: missing 'name: <Composite>' header line")]
    MissingName { origin: String },
    #[error("category '{0}' not present in counts")]
    MissingCategory(String),
}

/// An affine score over category percentages, clamped to `[1, 100]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeDefinition<R: Real = f64> {
    name: String,
    terms: Vec<(String, R)>,
    intercept: R,
}

impl<R: Real> CompositeDefinition<R> {
    pub fn new(
        name: &str,
        terms: Vec<(String, R)>,
        intercept: R,
    ) -> Result<Self, CompositeError> {
        if terms.is_empty() {
            return Err(CompositeError::NoTerms {
                origin: "<terms>".to_string(),
            });
        }
        Ok(CompositeDefinition {
            name: name.to_string(),
            terms,
            intercept,
        })
    }

    /// Parse the definition file format: a `name: <Composite>` header,
    /// `category weight` lines, one `intercept <value>` line, `#` comments.
    pub fn parse(origin: &str, text: &str) -> Result<Self, CompositeError> {
        let mut name: Option<String> = None;
        let mut terms: Vec<(String, R)> = Vec::new();
        let mut intercept = R::zero();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if name.is_none() {
                let stripped =
                    line.strip_prefix("name:")
                        .ok_or_else(|| CompositeError::MissingName {
                            origin: origin.to_string(),
                        })?;
                name = Some(stripped.trim().to_string());
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().expect("non-empty line has a first field");
            let value = parts.next().ok_or_else(|| CompositeError::Malformed {
                origin: origin.to_string(),
                line: idx + 1,
                message: format!("expected '<category> <weight>' or 'intercept <value>', got '{line}'"),
            })?;
            if parts.next().is_some() {
                return Err(CompositeError::Malformed {
                    origin: origin.to_string(),
                    line: idx + 1,
                    message: format!("too many fields in '{line}'"),
                });
            }
            let parsed: f64 = value.parse().map_err(|_| CompositeError::Malformed {
                origin: origin.to_string(),
                line: idx + 1,
                message: format!("invalid number '{value}'"),
            })?;
            if head == "intercept" {
                intercept = R::c(parsed);
            } else {
                terms.push((head.to_string(), R::c(parsed)));
            }
        }
        let name = name.ok_or_else(|| CompositeError::MissingName {
            origin: origin.to_string(),
        })?;
        if terms.is_empty() {
            return Err(CompositeError::NoTerms {
                origin: origin.to_string(),
            });
        }
        Ok(CompositeDefinition {
            name,
            terms,
            intercept,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CompositeError> {
        let text = std::fs::read_to_string(path).map_err(|source| CompositeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        CompositeDefinition::parse(&path.display().to_string(), &text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[(String, R)] {
        &self.terms
    }

    pub fn intercept(&self) -> R {
        self.intercept
    }

    /// `clamp(intercept + Σ weight × pct(category), 1, 100)`. The term
    /// sum accumulates before the intercept, so exactly balanced terms
    /// cancel exactly.
    pub fn evaluate(&self, counts: &CategoryCounts) -> Result<R, CompositeError> {
        let mut terms = R::zero();
        for (category, weight) in &self.terms {
            let pct: R = counts
                .percentage(category)
                .ok_or_else(|| CompositeError::MissingCategory(category.clone()))?;
            terms += *weight * pct;
        }
        let score = self.intercept + terms;
        Ok(score.max(R::c(SCORE_MIN)).min(R::c(SCORE_MAX)))
    }
}

/// Evaluate one composite against category counts.
pub fn evaluate_composite<R: Real>(
    def: &CompositeDefinition<R>,
    counts: &CategoryCounts,
) -> Result<R, CompositeError> {
    def.evaluate(counts)
}

/// The shipped default definitions (Tone, Clout, Analytical, Authenticity).
pub fn default_pack<R: Real>() -> Vec<CompositeDefinition<R>> {
    DEFAULT_COMPOSITE_SOURCES
        .iter()
        .map(|(file, text)| {
            CompositeDefinition::parse(file, text)
                .expect("embedded composite definitions are well-formed")
        })
        .collect()
}

/// Load every `*.cmp` file in a directory, sorted by file name.
pub fn load_dir<R: Real>(dir: &Path) -> Result<Vec<CompositeDefinition<R>>, CompositeError> {
    let entries = std::fs::read_dir(dir).map_err(|source| CompositeError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "cmp").unwrap_or(false))
        .collect();
    paths.sort();
    paths.iter().map(|p| CompositeDefinition::load(p)).collect()
}
