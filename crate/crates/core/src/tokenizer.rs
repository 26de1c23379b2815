//! Word and sentence segmentation.
//!
//! Words are maximal runs of alphabetic characters, optionally joined by a
//! single internal apostrophe or hyphen (`don't`, `middle-class`). Pure
//! numbers and punctuation yield no tokens. Sentences split at `.`, `!`,
//! `?` followed by whitespace and an uppercase letter, or at end of text;
//! an abbreviation stop-list suppresses splits after entries like `Mr` or
//! `U.S`.

use std::collections::HashSet;

/// Shipped abbreviation stop-list (one entry per line, `#` comments).
pub const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

const APOSTROPHES: [char; 2] = ['\'', '\u{2019}'];
const HYPHENS: [char; 2] = ['-', '\u{2010}'];

/// One word occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordToken {
    /// The surface form as it appeared in the text.
    pub surface: String,
    /// Lowercase form used for lexicon matching and type counting.
    pub folded: String,
    /// Number of alphabetic characters (joiners excluded).
    pub letter_count: usize,
}

impl WordToken {
    fn new(surface: String) -> Self {
        let folded = surface.to_lowercase();
        let letter_count = surface.chars().filter(|c| c.is_alphabetic()).count();
        WordToken {
            surface,
            folded,
            letter_count,
        }
    }

    /// A "big word" has six or more letters.
    pub fn is_big_word(&self) -> bool {
        self.letter_count >= 6
    }
}

/// Half-open token range forming one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentenceSpan {
    pub start_token: usize,
    /// Exclusive.
    pub end_token: usize,
}

impl SentenceSpan {
    pub fn len(&self) -> usize {
        self.end_token - self.start_token
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sentence-split suppression list.
///
/// Entries are compared case-insensitively against the word preceding a
/// period, with any trailing period stripped (`U.S.` and `U.S` are the
/// same entry).
#[derive(Debug, Clone)]
pub struct AbbreviationList {
    entries: HashSet<String>,
}

impl AbbreviationList {
    /// Empty list: every period is a split candidate.
    pub fn empty() -> Self {
        AbbreviationList {
            entries: HashSet::new(),
        }
    }

    /// Parse the one-entry-per-line format; `#` starts a comment line.
    pub fn parse(text: &str) -> Self {
        let mut list = AbbreviationList::empty();
        list.extend_from(text);
        list
    }

    /// Add entries from another stop-list file's contents.
    pub fn extend_from(&mut self, text: &str) {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.insert(line);
        }
    }

    pub fn insert(&mut self, entry: &str) {
        let normalized = entry.trim().trim_end_matches('.').to_lowercase();
        if !normalized.is_empty() {
            self.entries.insert(normalized);
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for AbbreviationList {
    fn default() -> Self {
        AbbreviationList::parse(DEFAULT_ABBREVIATIONS)
    }
}

fn is_joiner(c: char) -> bool {
    APOSTROPHES.contains(&c) || HYPHENS.contains(&c)
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Segment `text` into word tokens and sentence spans using the shipped
/// abbreviation stop-list.
pub fn tokenize(text: &str) -> (Vec<WordToken>, Vec<SentenceSpan>) {
    tokenize_with(text, &AbbreviationList::default())
}

/// Segment `text` with a caller-supplied abbreviation stop-list.
pub fn tokenize_with(text: &str, abbreviations: &AbbreviationList) -> (Vec<WordToken>, Vec<SentenceSpan>) {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let mut tokens: Vec<WordToken> = Vec::new();
    let mut boundaries: Vec<usize> = Vec::new();
    let mut sentence_start = 0usize;

    let mut i = 0usize;
    while i < n {
        let c = chars[i];
        if c.is_alphabetic() {
            let start = i;
            let mut joiner_used = false;
            i += 1;
            loop {
                if i < n && chars[i].is_alphabetic() {
                    i += 1;
                } else if i + 1 < n
                    && !joiner_used
                    && is_joiner(chars[i])
                    && chars[i + 1].is_alphabetic()
                {
                    joiner_used = true;
                    i += 2;
                } else {
                    break;
                }
            }
            tokens.push(WordToken::new(chars[start..i].iter().collect()));
        } else if is_terminator(c) {
            let suppressed =
                c == '.' && abbreviations.contains(&preceding_word(&chars, i));
            if !suppressed && splits_here(&chars, i) && tokens.len() > sentence_start {
                boundaries.push(tokens.len());
                sentence_start = tokens.len();
            }
            i += 1;
        } else {
            i += 1;
        }
    }
    if tokens.len() > sentence_start {
        boundaries.push(tokens.len());
    }

    let mut spans = Vec::with_capacity(boundaries.len());
    let mut start = 0usize;
    for end in boundaries {
        spans.push(SentenceSpan {
            start_token: start,
            end_token: end,
        });
        start = end;
    }
    (tokens, spans)
}

/// A terminator splits when followed by whitespace and an uppercase
/// letter, or by end of text (possibly after trailing whitespace).
fn splits_here(chars: &[char], i: usize) -> bool {
    let mut j = i + 1;
    if j == chars.len() {
        return true;
    }
    if !chars[j].is_whitespace() {
        return false;
    }
    while j < chars.len() && chars[j].is_whitespace() {
        j += 1;
    }
    j == chars.len() || chars[j].is_uppercase()
}

/// The contiguous word chunk just before position `i` (letters, digits,
/// internal periods, and joiners), used for the abbreviation check.
fn preceding_word(chars: &[char], i: usize) -> String {
    let mut start = i;
    while start > 0 {
        let c = chars[start - 1];
        if c.is_alphabetic() || c.is_ascii_digit() || c == '.' || is_joiner(c) {
            start -= 1;
        } else {
            break;
        }
    }
    chars[start..i].iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(tokens: &[WordToken]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn numbers_and_punctuation_excluded() {
        let (tokens, spans) = tokenize("We won in 1984!");
        assert_eq!(surfaces(&tokens), vec!["We", "won", "in"]);
        assert_eq!(spans.len(), 1);
        assert_eq!(spans[0], SentenceSpan { start_token: 0, end_token: 3 });
    }

    #[test]
    fn empty_text() {
        let (tokens, spans) = tokenize("");
        assert!(tokens.is_empty());
        assert!(spans.is_empty());
    }

    #[test]
    fn two_sentences() {
        let (tokens, spans) = tokenize("I win. We go now.");
        assert_eq!(tokens.len(), 5);
        assert_eq!(spans.len(), 2);
        assert_eq!(spans[0].len(), 2);
        assert_eq!(spans[1].len(), 3);
    }

    #[test]
    fn contraction_is_one_token() {
        let (tokens, _) = tokenize("don't");
        assert_eq!(surfaces(&tokens), vec!["don't"]);
        assert_eq!(tokens[0].letter_count, 4);
        assert!(!tokens[0].is_big_word());
    }

    #[test]
    fn curly_apostrophe_joins() {
        let (tokens, _) = tokenize("we\u{2019}re ready");
        assert_eq!(tokens[0].surface, "we\u{2019}re");
        assert_eq!(tokens[0].letter_count, 4);
    }

    #[test]
    fn hyphenated_compound_is_one_token() {
        let (tokens, _) = tokenize("middle-class values");
        assert_eq!(surfaces(&tokens), vec!["middle-class", "values"]);
        assert_eq!(tokens[0].letter_count, 11);
        assert!(tokens[0].is_big_word());
    }

    #[test]
    fn only_one_joiner_per_token() {
        let (tokens, _) = tokenize("mother-in-law");
        assert_eq!(surfaces(&tokens), vec!["mother-in", "law"]);
    }

    #[test]
    fn trailing_joiner_not_consumed() {
        let (tokens, _) = tokenize("well- spoken");
        assert_eq!(surfaces(&tokens), vec!["well", "spoken"]);
    }

    #[test]
    fn pure_numbers_produce_no_tokens() {
        let (tokens, spans) = tokenize("1982 3.5 42");
        assert!(tokens.is_empty());
        assert!(spans.is_empty());
    }

    #[test]
    fn big_word_boundary() {
        let (tokens, _) = tokenize("nation we");
        assert!(tokens[0].is_big_word());
        assert!(!tokens[1].is_big_word());
    }

    #[test]
    fn abbreviation_suppresses_split() {
        let (tokens, spans) = tokenize("Mr. Smith won. He left.");
        assert_eq!(tokens.len(), 5);
        assert_eq!(spans.len(), 2);
        assert_eq!(spans[0].len(), 3);
        assert_eq!(spans[1].len(), 2);
    }

    #[test]
    fn dotted_abbreviation_suppresses_split() {
        // "U.S." contributes the two letter-run tokens U and S
        let (_, spans) = tokenize("The U.S. Senate agreed. We moved on.");
        assert_eq!(spans.len(), 2);
        assert_eq!(spans[0].len(), 5);
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        let (tokens, spans) = tokenize("He won. she lost.");
        assert_eq!(tokens.len(), 4);
        assert_eq!(spans.len(), 1);
    }

    #[test]
    fn unterminated_text_closes_final_sentence() {
        let (tokens, spans) = tokenize("We will prevail");
        assert_eq!(tokens.len(), 3);
        assert_eq!(spans.len(), 1);
        assert_eq!(spans[0].end_token, 3);
    }

    #[test]
    fn exclamation_runs() {
        let (_, spans) = tokenize("Really?! We did it!");
        assert_eq!(spans.len(), 2);
    }

    #[test]
    fn custom_abbreviation_list() {
        let mut abbrevs = AbbreviationList::default();
        abbrevs.insert("fig");
        let (_, spans) = tokenize_with("See fig. Two for details.", &abbrevs);
        assert_eq!(spans.len(), 1);
    }

    #[test]
    fn default_list_parses() {
        let list = AbbreviationList::default();
        assert!(list.contains("mr"));
        assert!(list.contains("Mr"));
        assert!(list.contains("u.s"));
        assert!(!list.is_empty());
    }

    fn spans_partition(tokens: usize, spans: &[SentenceSpan]) -> bool {
        let mut expected_start = 0;
        for s in spans {
            if s.start_token != expected_start || s.end_token <= s.start_token {
                return false;
            }
            expected_start = s.end_token;
        }
        expected_start == tokens
    }

    proptest! {
        #[test]
        fn tokens_never_empty_or_numeric(text in "\\PC{0,200}") {
            let (tokens, spans) = tokenize(&text);
            for t in &tokens {
                prop_assert!(t.letter_count > 0);
                prop_assert!(t.surface.chars().any(|c| c.is_alphabetic()));
                prop_assert!(!t.surface.chars().all(|c| c.is_ascii_digit()));
            }
            prop_assert!(spans_partition(tokens.len(), &spans));
        }

        #[test]
        fn retokenizing_surfaces_is_identity(text in "[a-zA-Z' .,;!?0-9-]{0,200}") {
            let (tokens, _) = tokenize(&text);
            let rejoined = tokens
                .iter()
                .map(|t| t.surface.clone())
                .collect::<Vec<_>>()
                .join(" ");
            let (again, _) = tokenize(&rejoined);
            prop_assert_eq!(tokens, again);
        }
    }
}
