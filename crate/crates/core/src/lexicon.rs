//! Category wordlists with trailing-`*` prefix wildcards, and category
//! counting over token streams.
//!
//! A token hits a category when its folded form equals a literal entry or
//! begins with any wildcard stem. Hits are per token per category: a token
//! matching several entries of one category counts once there, while
//! distinct categories count independently.

use crate::scalar::Real;
use crate::tokenizer::WordToken;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Shipped category pack, reconstructed from published example words.
/// Each entry is `(file name, file contents)`.
pub const DEFAULT_LEXICON_SOURCES: [(&str, &str); 13] = [
    ("self.lex", include_str!("../data/lexicons/self.lex")),
    ("we.lex", include_str!("../data/lexicons/we.lex")),
    ("you.lex", include_str!("../data/lexicons/you.lex")),
    ("shehe.lex", include_str!("../data/lexicons/shehe.lex")),
    ("they.lex", include_str!("../data/lexicons/they.lex")),
    ("ipron.lex", include_str!("../data/lexicons/ipron.lex")),
    ("posemo.lex", include_str!("../data/lexicons/posemo.lex")),
    ("negemo.lex", include_str!("../data/lexicons/negemo.lex")),
    ("cogproc.lex", include_str!("../data/lexicons/cogproc.lex")),
    ("achieve.lex", include_str!("../data/lexicons/achieve.lex")),
    ("familiarity.lex", include_str!("../data/lexicons/familiarity.lex")),
    ("symbolism.lex", include_str!("../data/lexicons/symbolism.lex")),
    ("politics.lex", include_str!("../data/lexicons/politics.lex")),
];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: cannot read lexicon")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}:{line}: wildcard '*' only allowed at the end of an entry: '{entry}'")]
    MalformedPattern {
        origin: String,
        line: usize,
        entry: String,
    },
    #[error("{origin}:{line}: wildcard entry has an empty stem")]
    EmptyStem { origin: String, line: usize },
    #[error("{origin}: missing 'name: <Category>' header line")]
    MissingName { origin: String },
    #[error("duplicate category name '{0}'")]
    DuplicateCategory(String),
    #[error("category '{0}' not present in counts")]
    MissingCategory(String),
}

/// Prefix-stem set backed by a character trie, so a lookup walks the
/// token once regardless of how many stems are loaded.
#[derive(Debug, Clone, Default)]
struct PrefixTrie {
    children: HashMap<char, PrefixTrie>,
    terminal: bool,
}

impl PrefixTrie {
    fn insert(&mut self, stem: &str) {
        let mut node = self;
        for c in stem.chars() {
            node = node.children.entry(c).or_default();
        }
        node.terminal = true;
    }

    /// True when any inserted stem is a prefix of `word`.
    fn matches(&self, word: &str) -> bool {
        let mut node = self;
        for c in word.chars() {
            if node.terminal {
                return true;
            }
            match node.children.get(&c) {
                Some(child) => node = child,
                None => return false,
            }
        }
        node.terminal
    }

    fn is_empty(&self) -> bool {
        !self.terminal && self.children.is_empty()
    }
}

/// A named category wordlist.
#[derive(Debug, Clone)]
pub struct Lexicon {
    name: String,
    literals: HashSet<String>,
    prefixes: PrefixTrie,
    literal_count: usize,
    prefix_count: usize,
}

impl Lexicon {
    /// Build a lexicon directly from entry strings; entries ending in `*`
    /// become prefix stems. Everything is folded to lowercase.
    pub fn new<S: AsRef<str>>(
        name: &str,
        entries: impl IntoIterator<Item = S>,
    ) -> Result<Self, LexiconError> {
        let mut lex = Lexicon {
            name: name.to_string(),
            literals: HashSet::new(),
            prefixes: PrefixTrie::default(),
            literal_count: 0,
            prefix_count: 0,
        };
        for (i, entry) in entries.into_iter().enumerate() {
            lex.add_entry("<entries>", i + 1, entry.as_ref())?;
        }
        Ok(lex)
    }

    /// Parse the lexicon file format: a `name: <Category>` header line,
    /// then one entry per line; `#` starts a comment line. `origin` is
    /// used in error messages (a path, or a tag for embedded data).
    pub fn parse(origin: &str, text: &str) -> Result<Self, LexiconError> {
        let mut name: Option<String> = None;
        let mut lex = Lexicon {
            name: String::new(),
            literals: HashSet::new(),
            prefixes: PrefixTrie::default(),
            literal_count: 0,
            prefix_count: 0,
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if name.is_none() {
                let stripped = line
                    .strip_prefix("name:")
                    .ok_or_else(|| LexiconError::MissingName {
                        origin: origin.to_string(),
                    })?;
                name = Some(stripped.trim().to_string());
                continue;
            }
            lex.add_entry(origin, idx + 1, line)?;
        }
        lex.name = name.ok_or_else(|| LexiconError::MissingName {
            origin: origin.to_string(),
        })?;
        Ok(lex)
    }

    /// Load a lexicon file from disk.
    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Lexicon::parse(&path.display().to_string(), &text)
    }

    fn add_entry(&mut self, origin: &str, line: usize, entry: &str) -> Result<(), LexiconError> {
        let folded = entry.to_lowercase();
        if let Some(pos) = folded.find('*') {
            if pos != folded.len() - '*'.len_utf8() {
                return Err(LexiconError::MalformedPattern {
                    origin: origin.to_string(),
                    line,
                    entry: entry.to_string(),
                });
            }
            let stem = &folded[..pos];
            if stem.is_empty() {
                return Err(LexiconError::EmptyStem {
                    origin: origin.to_string(),
                    line,
                });
            }
            self.prefixes.insert(stem);
            self.prefix_count += 1;
        } else if self.literals.insert(folded) {
            self.literal_count += 1;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn literal_count(&self) -> usize {
        self.literal_count
    }

    pub fn prefix_count(&self) -> usize {
        self.prefix_count
    }

    /// True when `folded` (a lowercase word form) belongs to the category.
    pub fn matches(&self, folded: &str) -> bool {
        self.literals.contains(folded) || self.prefixes.matches(folded)
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty() && self.prefixes.is_empty()
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} literals, {} stems)",
            self.name, self.literal_count, self.prefix_count
        )
    }
}

/// The shipped default pack, embedded so the toolkit runs out of the box.
pub fn default_pack() -> Vec<Lexicon> {
    DEFAULT_LEXICON_SOURCES
        .iter()
        .map(|(file, text)| {
            Lexicon::parse(file, text).expect("embedded lexicon files are well-formed")
        })
        .collect()
}

/// Load every `*.lex` file in a directory, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<Lexicon>, LexiconError> {
    let entries = std::fs::read_dir(dir).map_err(|source| LexiconError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "lex").unwrap_or(false))
        .collect();
    paths.sort();
    paths.iter().map(|p| Lexicon::load(p)).collect()
}

/// Per-category hit counts over one token stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryCounts {
    hits: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl CategoryCounts {
    pub fn from_parts(hits: BTreeMap<String, u64>, total_tokens: u64) -> Self {
        CategoryCounts { hits, total_tokens }
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn hits(&self, category: &str) -> Option<u64> {
        self.hits.get(category).copied()
    }

    /// `100 * hits / total_tokens`; zero for an empty stream.
    pub fn percentage<R: Real>(&self, category: &str) -> Option<R> {
        let hits = self.hits(category)?;
        if self.total_tokens == 0 {
            return Some(R::zero());
        }
        Some(R::c(100.0) * R::c(hits as f64) / R::c(self.total_tokens as f64))
    }

    /// Category names in sorted order.
    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.hits.keys().map(|s| s.as_str())
    }
}

/// Count category hits for every lexicon over one token stream.
/// Categories are independent: one token may hit several of them.
pub fn count_categories(
    tokens: &[WordToken],
    lexicons: &[Lexicon],
) -> Result<CategoryCounts, LexiconError> {
    let mut seen: HashSet<&str> = HashSet::new();
    for lex in lexicons {
        if !seen.insert(lex.name()) {
            return Err(LexiconError::DuplicateCategory(lex.name().to_string()));
        }
    }
    let mut hits: BTreeMap<String, u64> = lexicons
        .iter()
        .map(|l| (l.name().to_string(), 0))
        .collect();
    for token in tokens {
        for lex in lexicons {
            if lex.matches(&token.folded) {
                *hits.get_mut(lex.name()).expect("category present") += 1;
            }
        }
    }
    Ok(CategoryCounts {
        hits,
        total_tokens: tokens.len() as u64,
    })
}

/// Combined status-language frequency: `pct(We) + pct(You) - pct(Self)`.
pub fn status_score<R: Real>(counts: &CategoryCounts) -> Result<R, LexiconError> {
    let need = |cat: &str| {
        counts
            .percentage::<R>(cat)
            .ok_or_else(|| LexiconError::MissingCategory(cat.to_string()))
    };
    Ok(need("We")? + need("You")? - need("Self")?)
}
