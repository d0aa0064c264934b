use std::collections::HashSet;
use std::io;
use std::path::Path;
use std::sync::OnceLock;

const BUNDLED_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");
const BUNDLED_STOP_WORDS: &str = include_str!("../../data/stopwords.txt");

/// Word lists that drive sentence splitting and phrase grouping.
///
/// Entries are stored case-folded. Abbreviations keep their trailing period
/// (`"e.g."`, `"dr."`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    abbreviations: HashSet<String>,
    stop_words: HashSet<String>,
}

impl Lexicon {
    /// Builds a lexicon from two newline-separated lists. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_lists(abbreviations: &str, stop_words: &str) -> Self {
        Self {
            abbreviations: parse_list(abbreviations),
            stop_words: parse_list(stop_words),
        }
    }

    /// The lists shipped with the crate.
    pub fn bundled() -> &'static Lexicon {
        static BUNDLED: OnceLock<Lexicon> = OnceLock::new();
        BUNDLED.get_or_init(|| Lexicon::from_lists(BUNDLED_ABBREVIATIONS, BUNDLED_STOP_WORDS))
    }

    /// Loads either list from disk, falling back to the bundled copy for any
    /// path that is `None`.
    pub fn load(abbreviations: Option<&Path>, stop_words: Option<&Path>) -> io::Result<Self> {
        let abbr = match abbreviations {
            Some(p) => std::fs::read_to_string(p)?,
            None => BUNDLED_ABBREVIATIONS.to_string(),
        };
        let stop = match stop_words {
            Some(p) => std::fs::read_to_string(p)?,
            None => BUNDLED_STOP_WORDS.to_string(),
        };
        Ok(Self::from_lists(&abbr, &stop))
    }

    /// `word` is the token preceding the period, without the period itself.
    pub fn is_abbreviation(&self, word: &str) -> bool {
        let mut key = word.to_lowercase();
        key.push('.');
        self.abbreviations.contains(&key)
    }

    pub fn is_stop_word(&self, word: &str) -> bool {
        self.stop_words.contains(&word.to_lowercase())
    }
}

impl Default for Lexicon {
    fn default() -> Self {
        Self::bundled().clone()
    }
}

fn parse_list(raw: &str) -> HashSet<String> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lists_load() {
        let lex = Lexicon::bundled();
        assert!(lex.is_abbreviation("e.g"));
        assert!(lex.is_abbreviation("Dr"));
        assert!(lex.is_abbreviation("etc"));
        assert!(!lex.is_abbreviation("cat"));
        for w in ["the", "in", "and", "but", "or", "so", "yet", "is"] {
            assert!(lex.is_stop_word(w), "{w}");
        }
        assert!(!lex.is_stop_word("hats"));
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let lex = Lexicon::from_lists("# header\n\nfoo.\n", "  Bar \n");
        assert!(lex.is_abbreviation("FOO"));
        assert!(lex.is_stop_word("bar"));
        assert!(!lex.is_stop_word("# header"));
    }
}
