//! Tokens, sentences and lexical units.
//!
//! Text is split at Unicode default word boundaries, grouped into sentences
//! with a rule-based splitter, and then into removable lexical units at one of
//! three granularities. All functions here are pure.

mod lexicon;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

pub use lexicon::Lexicon;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Half-open byte range into the source text.
    pub byte_span: Range<usize>,
    /// `false` for punctuation and symbols.
    pub is_word: bool,
    pub sentence_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    #[default]
    Word,
    Phrase,
    Clause,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Word => "word",
            Granularity::Phrase => "phrase",
            Granularity::Clause => "clause",
        })
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "word" => Ok(Granularity::Word),
            "phrase" => Ok(Granularity::Phrase),
            "clause" => Ok(Granularity::Clause),
            other => Err(format!("unknown granularity `{other}` (expected word, phrase or clause)")),
        }
    }
}

/// The removable atom of compression. Holds only word tokens; punctuation
/// between them stays inside `char_span`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexicalUnit {
    pub unit_id: usize,
    pub tokens: Vec<Token>,
    pub granularity: Granularity,
    /// Byte range from the first token's start to the last token's end.
    pub char_span: Range<usize>,
}

impl LexicalUnit {
    fn from_tokens(unit_id: usize, tokens: Vec<Token>, granularity: Granularity) -> Self {
        debug_assert!(!tokens.is_empty());
        let start = tokens[0].byte_span.start;
        let end = tokens[tokens.len() - 1].byte_span.end;
        Self {
            unit_id,
            tokens,
            granularity,
            char_span: start..end,
        }
    }

    /// The unit's original bytes, including any gaps between its tokens.
    pub fn text<'a>(&self, source: &'a str) -> &'a str {
        &source[self.char_span.clone()]
    }
}

/// Splits `text` at Unicode word boundaries, dropping whitespace segments.
/// Every returned token has `sentence_index` 0.
pub fn tokenize(text: &str) -> Vec<Token> {
    text.split_word_bound_indices()
        .filter(|(_, seg)| !seg.chars().all(char::is_whitespace))
        .map(|(start, seg)| Token {
            text: seg.to_string(),
            byte_span: start..start + seg.len(),
            is_word: seg.chars().any(char::is_alphanumeric),
            sentence_index: 0,
        })
        .collect()
}

/// [`split_sentences_with`] using the bundled abbreviation list.
pub fn split_sentences(tokens: Vec<Token>) -> Vec<Token> {
    split_sentences_with(tokens, Lexicon::bundled())
}

/// Assigns sentence indices. A `.`, `!` or `?` ends the sentence unless the
/// period closes a known abbreviation; the next word token opens a new one,
/// so trailing quotes and brackets stay with the sentence they close.
pub fn split_sentences_with(mut tokens: Vec<Token>, lexicon: &Lexicon) -> Vec<Token> {
    let mut index = 0;
    let mut pending = false;
    for i in 0..tokens.len() {
        if tokens[i].is_word && pending {
            index += 1;
            pending = false;
        }
        tokens[i].sentence_index = index;
        if is_terminator(&tokens[i].text) && !closes_abbreviation(&tokens, i, lexicon) {
            pending = true;
        }
    }
    tokens
}

fn is_terminator(tok: &str) -> bool {
    matches!(tok, "." | "!" | "?")
}

fn closes_abbreviation(tokens: &[Token], i: usize, lexicon: &Lexicon) -> bool {
    if tokens[i].text != "." || i == 0 {
        return false;
    }
    let prev = &tokens[i - 1];
    prev.is_word && prev.byte_span.end == tokens[i].byte_span.start && lexicon.is_abbreviation(&prev.text)
}

fn is_clause_break(tok: &str) -> bool {
    matches!(tok, "," | ";" | ":" | "\u{2014}")
}

/// [`segment_with`] using the bundled stop-word list.
pub fn segment(tokens: &[Token], granularity: Granularity) -> Vec<LexicalUnit> {
    segment_with(tokens, granularity, Lexicon::bundled())
}

/// Groups word tokens into lexical units. Unit ids are dense from 0 in
/// source order.
///
/// - `Word`: one unit per word token.
/// - `Phrase`: runs of words broken at any punctuation, and at a function
///   word that follows a content word; the function word opens the next
///   unit (`"cats in hats"` gives `cats` / `in hats`).
/// - `Clause`: runs broken at `, ; : —`. A conjunction after such a break
///   therefore opens the next clause.
///
/// No unit crosses a sentence boundary.
pub fn segment_with(tokens: &[Token], granularity: Granularity, lexicon: &Lexicon) -> Vec<LexicalUnit> {
    let mut units = Vec::new();
    let mut run: Vec<Token> = Vec::new();
    let mut run_has_content = false;
    let mut sentence = tokens.first().map_or(0, |t| t.sentence_index);

    let flush = |run: &mut Vec<Token>, units: &mut Vec<LexicalUnit>| {
        if !run.is_empty() {
            let id = units.len();
            units.push(LexicalUnit::from_tokens(id, std::mem::take(run), granularity));
        }
    };

    for tok in tokens {
        if tok.sentence_index != sentence {
            flush(&mut run, &mut units);
            run_has_content = false;
            sentence = tok.sentence_index;
        }
        match granularity {
            Granularity::Word => {
                if tok.is_word {
                    run.push(tok.clone());
                    flush(&mut run, &mut units);
                }
            }
            Granularity::Phrase => {
                if !tok.is_word {
                    flush(&mut run, &mut units);
                    run_has_content = false;
                } else if lexicon.is_stop_word(&tok.text) {
                    if run_has_content {
                        flush(&mut run, &mut units);
                        run_has_content = false;
                    }
                    run.push(tok.clone());
                } else {
                    run.push(tok.clone());
                    run_has_content = true;
                }
            }
            Granularity::Clause => {
                if tok.is_word {
                    run.push(tok.clone());
                } else if is_clause_break(&tok.text) {
                    flush(&mut run, &mut units);
                }
            }
        }
    }
    flush(&mut run, &mut units);
    units
}

/// Tokenize, split sentences and segment in one call.
pub fn segment_text(text: &str, granularity: Granularity, lexicon: &Lexicon) -> (Vec<Token>, Vec<LexicalUnit>) {
    let tokens = split_sentences_with(tokenize(text), lexicon);
    let units = segment_with(&tokens, granularity, lexicon);
    (tokens, units)
}
