//! Table assembly and rendering: one row per subject, bold column
//! maxima, italic column minima, dagger marks, Markdown and CSV output.
//!
//! Emphasis is decided on the full-precision values; only the displayed
//! text is rounded (to two decimals, `%`-suffixed for percentage
//! columns). The CSV variant carries full precision and separate mark
//! columns.

use crate::metrics::StyleProfile;
use crate::scalar::Real;
use crate::stats::SignificanceMarks;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("subject '{subject}' is missing measure '{measure}'")]
    MissingMeasure { subject: String, measure: String },
    #[error("marks shape mismatch: expected {rows}x{cols}")]
    MarksShape { rows: usize, cols: usize },
}

/// What one table column shows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure {
    MeanWordLength,
    BigWordPct,
    MeanSentenceLength,
    /// Percentage of tokens hitting a category.
    CategoryPct(String),
    /// A composite score by name.
    Composite(String),
}

impl Measure {
    pub fn column_name(&self) -> String {
        match self {
            Measure::MeanWordLength => "Mean word length".to_string(),
            Measure::BigWordPct => "Big words".to_string(),
            Measure::MeanSentenceLength => "Mean sentence length".to_string(),
            Measure::CategoryPct(name) => name.clone(),
            Measure::Composite(name) => name.clone(),
        }
    }

    /// Percent columns get a `%` suffix in rendered output.
    pub fn is_percent(&self) -> bool {
        matches!(self, Measure::BigWordPct | Measure::CategoryPct(_))
    }

    fn extract<R: Real>(&self, profile: &StyleProfile<R>) -> Option<R> {
        match self {
            Measure::MeanWordLength => Some(profile.complexity.mean_word_length),
            Measure::BigWordPct => Some(profile.complexity.big_word_pct),
            Measure::MeanSentenceLength => Some(profile.complexity.mean_sentence_length),
            Measure::CategoryPct(name) => profile.categories.percentage(name),
            Measure::Composite(name) => profile.composites.get(name).copied(),
        }
    }
}

/// One rendered cell: a value plus its significance marks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell<R: Real = f64> {
    pub value: R,
    pub marks: SignificanceMarks,
}

/// A paper-style table: subjects down, measures across.
#[derive(Debug, Clone, PartialEq)]
pub struct StyleTable<R: Real = f64> {
    pub title: String,
    /// Rendered as an italic line under the title (markdown only).
    pub caption: Option<String>,
    pub columns: Vec<Measure>,
    pub row_labels: Vec<String>,
    pub cells: Vec<Vec<Cell<R>>>,
}

/// Assemble a table from profiles. `marks`, when given, must be one row
/// of marks per profile, one entry per column.
pub fn build_table<R: Real>(
    title: &str,
    profiles: &[StyleProfile<R>],
    columns: &[Measure],
    marks: Option<&[Vec<SignificanceMarks>]>,
) -> Result<StyleTable<R>, ReportError> {
    if let Some(m) = marks {
        let shape_ok =
            m.len() == profiles.len() && m.iter().all(|row| row.len() == columns.len());
        if !shape_ok {
            return Err(ReportError::MarksShape {
                rows: profiles.len(),
                cols: columns.len(),
            });
        }
    }
    let mut row_labels = Vec::with_capacity(profiles.len());
    let mut cells = Vec::with_capacity(profiles.len());
    for (i, profile) in profiles.iter().enumerate() {
        let mut row = Vec::with_capacity(columns.len());
        for (j, column) in columns.iter().enumerate() {
            let value = column.extract(profile).ok_or_else(|| {
                ReportError::MissingMeasure {
                    subject: profile.subject.clone(),
                    measure: column.column_name(),
                }
            })?;
            let marks = marks
                .map(|m| m[i][j])
                .unwrap_or_default();
            row.push(Cell { value, marks });
        }
        row_labels.push(profile.subject.clone());
        cells.push(row);
    }
    Ok(StyleTable {
        title: title.to_string(),
        caption: None,
        columns: columns.to_vec(),
        row_labels,
        cells,
    })
}

/// Output format for a rendered table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

/// Per-column emphasis: which rows carry bold (max) and italic (min).
/// Ties share the emphasis; single-row tables get none.
fn emphasis<R: Real>(table: &StyleTable<R>, col: usize) -> (Vec<bool>, Vec<bool>) {
    let n = table.row_labels.len();
    let mut is_max = vec![false; n];
    let mut is_min = vec![false; n];
    if n >= 2 {
        let values: Vec<R> = (0..n).map(|i| table.cells[i][col].value).collect();
        let max = values.iter().copied().fold(R::neg_infinity(), R::max);
        let min = values.iter().copied().fold(R::infinity(), R::min);
        if max > min {
            for (i, &v) in values.iter().enumerate() {
                is_max[i] = v == max;
                is_min[i] = v == min;
            }
        }
    }
    (is_max, is_min)
}

pub fn render_table<R: Real>(table: &StyleTable<R>, format: TableFormat) -> String {
    match format {
        TableFormat::Markdown => render_markdown(table),
        TableFormat::Csv => render_csv(table),
    }
}

fn render_markdown<R: Real>(table: &StyleTable<R>) -> String {
    let ncols = table.columns.len();
    let mut max_marks = Vec::with_capacity(ncols);
    let mut min_marks = Vec::with_capacity(ncols);
    for j in 0..ncols {
        let (mx, mn) = emphasis(table, j);
        max_marks.push(mx);
        min_marks.push(mn);
    }

    let mut out = format!("### {}\n\n", table.title);
    if let Some(caption) = &table.caption {
        out.push_str(&format!("*{caption}*\n\n"));
    }
    out.push('|');
    out.push(' ');
    out.push('|');
    for c in &table.columns {
        out.push_str(&format!(" {} |", c.column_name()));
    }
    out.push('\n');
    out.push_str("|---|");
    for _ in &table.columns {
        out.push_str("---:|");
    }
    out.push('\n');
    for (i, label) in table.row_labels.iter().enumerate() {
        out.push_str(&format!("| {label} |"));
        for (j, column) in table.columns.iter().enumerate() {
            let cell = table.cells[i][j];
            let suffix = if column.is_percent() { "%" } else { "" };
            let text = format!(
                "{:.2}{}{}",
                cell.value.to_f64().unwrap_or(f64::NAN),
                suffix,
                cell.marks.render()
            );
            let text = if max_marks[j][i] {
                format!("**{text}**")
            } else if min_marks[j][i] {
                format!("*{text}*")
            } else {
                text
            };
            out.push_str(&format!(" {text} |"));
        }
        out.push('\n');
    }
    out
}

fn render_csv<R: Real>(table: &StyleTable<R>) -> String {
    let mut out = String::from("subject");
    for c in &table.columns {
        let name = c.column_name();
        out.push_str(&format!(",{},{}_marks", csv_field(&name), csv_field(&name)));
    }
    out.push('\n');
    for (i, label) in table.row_labels.iter().enumerate() {
        out.push_str(&csv_field(label));
        for (j, _) in table.columns.iter().enumerate() {
            let cell = table.cells[i][j];
            out.push_str(&format!(",{},{}", cell.value, cell.marks.render()));
        }
        out.push('\n');
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
