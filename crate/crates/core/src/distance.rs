//! Intertextual distance between texts: the normalized sum of absolute
//! term-frequency differences after scaling the longer text down to the
//! shorter one, over the union vocabulary. Ranges over [0, 1]: zero for
//! identical relative frequency profiles, one for disjoint vocabularies.

use crate::scalar::Real;
use crate::tokenizer::WordToken;
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DistanceError {
    #[error("cannot compute a distance for an empty text")]
    EmptyText,
    #[error("need at least two texts, got {0}")]
    FewerThanTwoTexts(usize),
    #[error("duplicate text label '{0}'")]
    DuplicateLabel(String),
}

/// Absolute term frequencies of one text over its case-folded vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencyVector {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl FrequencyVector {
    pub fn from_tokens(tokens: &[WordToken]) -> Self {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for t in tokens {
            *counts.entry(t.folded.clone()).or_insert(0) += 1;
        }
        FrequencyVector {
            counts,
            total: tokens.len() as u64,
        }
    }

    /// Build from explicit (term, frequency) pairs; zero frequencies are
    /// dropped so that every stored term has frequency >= 1.
    pub fn from_counts<S: Into<String>>(entries: impl IntoIterator<Item = (S, u64)>) -> Self {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for (term, f) in entries {
            if f > 0 {
                *counts.entry(term.into()).or_insert(0) += f;
            }
        }
        let total = counts.values().sum();
        FrequencyVector { counts, total }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn vocabulary_size(&self) -> usize {
        self.counts.len()
    }

    pub fn frequency(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    /// Terms in sorted order with their frequencies.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, &f)| (t.as_str(), f))
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

/// Compensated (Kahan) accumulator; keeps the matrix reproducible
/// bit-for-bit for a fixed term order.
struct KahanSum<R: Real> {
    sum: R,
    carry: R,
}

impl<R: Real> KahanSum<R> {
    fn new() -> Self {
        KahanSum {
            sum: R::zero(),
            carry: R::zero(),
        }
    }

    fn add(&mut self, value: R) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Distance between two texts, summing `|tf_short - tf_long * ratio|`
/// over the union vocabulary in sorted term order and dividing by twice
/// the shorter text's length. Which text is scaled does not change the
/// value; the shorter one is used as reference.
pub fn labbe_distance<R: Real>(
    a: &FrequencyVector,
    b: &FrequencyVector,
) -> Result<R, DistanceError> {
    if a.is_empty() || b.is_empty() {
        return Err(DistanceError::EmptyText);
    }
    let (short, long) = if a.total <= b.total { (a, b) } else { (b, a) };
    let ratio = R::c(short.total as f64) / R::c(long.total as f64);

    let mut acc = KahanSum::new();
    let mut shared_term = false;
    let mut short_iter = short.counts.iter().peekable();
    let mut long_iter = long.counts.iter().peekable();
    loop {
        match (short_iter.peek(), long_iter.peek()) {
            (Some((ts, &fs)), Some((tl, &fl))) => match ts.cmp(tl) {
                std::cmp::Ordering::Less => {
                    acc.add(R::c(fs as f64));
                    short_iter.next();
                }
                std::cmp::Ordering::Greater => {
                    acc.add(R::c(fl as f64) * ratio);
                    long_iter.next();
                }
                std::cmp::Ordering::Equal => {
                    shared_term = true;
                    acc.add((R::c(fs as f64) - R::c(fl as f64) * ratio).abs());
                    short_iter.next();
                    long_iter.next();
                }
            },
            (Some((_, &fs)), None) => {
                acc.add(R::c(fs as f64));
                short_iter.next();
            }
            (None, Some((_, &fl))) => {
                acc.add(R::c(fl as f64) * ratio);
                long_iter.next();
            }
            (None, None) => break,
        }
    }
    if !shared_term {
        // disjoint vocabularies: the distance is 1 by definition
        return Ok(R::one());
    }
    Ok(acc.sum / (R::c(2.0) * R::c(short.total as f64)))
}

/// Symmetric all-pairs distance matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<R: Real = f64> {
    labels: Vec<String>,
    values: Vec<R>,
}

impl<R: Real> DistanceMatrix<R> {
    /// Build from explicit symmetric values (row-major, `n * n`).
    pub fn from_values(labels: Vec<String>, values: Vec<R>) -> Self {
        assert_eq!(labels.len() * labels.len(), values.len());
        DistanceMatrix { labels, values }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        self.values[i * self.labels.len() + j]
    }

    /// Number of stored off-diagonal values: `(n*n - n) / 2`.
    pub fn pair_count(&self) -> usize {
        let n = self.labels.len();
        (n * n - n) / 2
    }

    /// Upper-triangle pairs `(i, j, distance)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, R)> + '_ {
        let n = self.labels.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Delimited export: header row and column of labels, full-precision
    /// values.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("label");
        for l in &self.labels {
            out.push(',');
            out.push_str(&csv_quote(l));
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&csv_quote(&self.labels[i]));
            for j in 0..self.len() {
                out.push(',');
                out.push_str(&format!("{}", self.get(i, j)));
            }
            out.push('\n');
        }
        out
    }

    /// Long-form export: one `(label_a, label_b, distance)` row per pair.
    pub fn to_long_csv(&self) -> String {
        let mut out = String::from("label_a,label_b,distance\n");
        for (i, j, d) in self.pairs() {
            out.push_str(&format!(
                "{},{},{}\n",
                csv_quote(&self.labels[i]),
                csv_quote(&self.labels[j]),
                d
            ));
        }
        out
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Compute every unordered pair distance. Pairs are evaluated
/// independently (in parallel) and written to disjoint cells, so the
/// result is identical to a sequential fill.
pub fn distance_matrix<R: Real>(
    texts: &[(String, FrequencyVector)],
) -> Result<DistanceMatrix<R>, DistanceError> {
    if texts.len() < 2 {
        return Err(DistanceError::FewerThanTwoTexts(texts.len()));
    }
    let mut seen = std::collections::HashSet::new();
    for (label, vector) in texts {
        if !seen.insert(label.as_str()) {
            return Err(DistanceError::DuplicateLabel(label.clone()));
        }
        if vector.is_empty() {
            return Err(DistanceError::EmptyText);
        }
    }
    let n = texts.len();
    let index_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let computed: Vec<((usize, usize), R)> = index_pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = labbe_distance(&texts[i].1, &texts[j].1)
                .expect("vectors checked nonempty above");
            ((i, j), d)
        })
        .collect();

    let mut values = vec![R::zero(); n * n];
    for ((i, j), d) in computed {
        values[i * n + j] = d;
        values[j * n + i] = d;
    }
    Ok(DistanceMatrix {
        labels: texts.iter().map(|(l, _)| l.clone()).collect(),
        values,
    })
}
