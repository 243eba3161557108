//! Rule-based text preprocessing: tokenization, sentence splitting, POS
//! tagging, morphological roots and generalized POS tags.
//!
//! Gold token annotations in a corpus always take precedence; these rules
//! only fill in what a corpus does not provide.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::corpus::{Sentence, Token};
use crate::error::Result;

const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.txt");
const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

/// A token span before tagging. Offsets are code-point counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosTag {
    pub full: String,
    pub generalized: String,
}

impl PosTag {
    pub fn new(full: impl Into<String>) -> Self {
        let full = full.into();
        let generalized = generalize_pos(&full);
        PosTag { full, generalized }
    }
}

/// Splits text into tokens: maximal letter/digit runs, with letter runs
/// joined by single hyphens kept together; any other non-space character
/// is a token on its own.
pub fn tokenize(text: &str) -> Vec<TokenSpan> {
    let chars: Vec<char> = text.chars().collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_alphanumeric() {
            i += 1;
            loop {
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let joins = i + 1 < chars.len()
                    && chars[i] == '-'
                    && chars[i - 1].is_alphabetic()
                    && chars[i + 1].is_alphabetic();
                if !joins {
                    break;
                }
                i += 1;
            }
        } else {
            i += 1;
        }
        spans.push(TokenSpan {
            start,
            end: i,
            surface: chars[start..i].iter().collect(),
        });
    }
    spans
}

/// Abbreviations that do not end a sentence when followed by a period.
#[derive(Debug, Clone)]
pub struct Abbreviations(HashSet<String>);

impl Abbreviations {
    pub fn parse(list: &str) -> Self {
        Abbreviations(
            entries(list)
                .map(|line| line.to_lowercase())
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(&word.to_lowercase())
    }
}

impl Default for Abbreviations {
    fn default() -> Self {
        Self::parse(DEFAULT_ABBREVIATIONS)
    }
}

fn entries(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Sentence boundaries fall after `.`, `!` or `?` unless the token before
/// the period is a single uppercase letter or a listed abbreviation.
pub fn split_sentences<S: AsRef<str>>(tokens: &[S], abbreviations: &Abbreviations) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut first = 0;
    for (i, tok) in tokens.iter().enumerate() {
        let tok = tok.as_ref();
        if !matches!(tok, "." | "!" | "?") {
            continue;
        }
        if tok == "." && i > 0 {
            let prev = tokens[i - 1].as_ref();
            let mut prev_chars = prev.chars();
            let single_upper = matches!(
                (prev_chars.next(), prev_chars.next()),
                (Some(c), None) if c.is_uppercase()
            );
            if single_upper || abbreviations.contains(prev) {
                continue;
            }
        }
        sentences.push(Sentence { first_token: first, last_token: i });
        first = i + 1;
    }
    if first < tokens.len() {
        sentences.push(Sentence {
            first_token: first,
            last_token: tokens.len() - 1,
        });
    }
    sentences
}

/// Lexicon-plus-suffix-rules tagger.
#[derive(Debug, Clone)]
pub struct Tagger {
    lexicon: HashMap<String, String>,
}

impl Tagger {
    /// Parses `word<TAB>TAG` lines; `#` starts a comment line.
    pub fn parse(lexicon: &str) -> Self {
        let lexicon = entries(lexicon)
            .filter_map(|line| {
                let mut parts = line.split_whitespace();
                Some((parts.next()?.to_lowercase(), parts.next()?.to_string()))
            })
            .collect();
        Tagger { lexicon }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Self::parse(&fs::read_to_string(path)?))
    }

    pub fn tag_word(&self, word: &str) -> String {
        let lower = word.to_lowercase();
        if let Some(tag) = self.lexicon.get(&lower) {
            return tag.clone();
        }
        if lower.chars().all(|c| c.is_ascii_digit()) {
            return "CD".into();
        }
        let mut chars = lower.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if !c.is_alphanumeric() {
                return match c {
                    '.' | '!' | '?' => ".",
                    ',' => ",",
                    ':' | ';' => ":",
                    '(' | '[' => "(",
                    ')' | ']' => ")",
                    _ => "SYM",
                }
                .into();
            }
        }
        let len = lower.chars().count();
        let tag = if len > 4 && lower.ends_with("ing") {
            "VBG"
        } else if len > 3 && lower.ends_with("ed") {
            "VBD"
        } else if len > 3 && lower.ends_with("ly") {
            "RB"
        } else if len > 3 && plural_s(&lower) {
            "NNS"
        } else {
            "NN"
        };
        tag.into()
    }

    pub fn tag<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<String> {
        tokens.iter().map(|t| self.tag_word(t.as_ref())).collect()
    }
}

impl Default for Tagger {
    fn default() -> Self {
        Self::parse(DEFAULT_LEXICON)
    }
}

fn plural_s(word: &str) -> bool {
    word.ends_with('s') && !word.ends_with("ss") && !word.ends_with("us") && !word.ends_with("is")
}

fn default_tagger() -> &'static Tagger {
    static TAGGER: OnceLock<Tagger> = OnceLock::new();
    TAGGER.get_or_init(Tagger::default)
}

/// Tags tokens with the built-in lexicon.
pub fn pos_tag<S: AsRef<str>>(tokens: &[S]) -> Vec<String> {
    default_tagger().tag(tokens)
}

/// Lowercases and strips inflectional suffixes according to the tag.
/// Rules are applied until none fires, so the result is a fixed point.
pub fn lemmatize(surface: &str, pos: &str) -> String {
    let mut word = surface.to_lowercase();
    while let Some(shorter) = strip_once(&word, pos) {
        word = shorter;
    }
    word
}

fn strip_once(word: &str, pos: &str) -> Option<String> {
    let len = word.chars().count();
    match pos {
        "NNS" | "VBZ" => {
            if len > 4 && word.ends_with("ies") {
                Some(format!("{}y", &word[..word.len() - 3]))
            } else if len > 3 && plural_s(word) {
                Some(word[..word.len() - 1].to_string())
            } else {
                None
            }
        }
        "VBG" if len > 5 && word.ends_with("ing") => Some(undouble(&word[..word.len() - 3])),
        "VBD" | "VBN" if len > 4 && word.ends_with("ed") => Some(undouble(&word[..word.len() - 2])),
        _ => None,
    }
}

/// "runn" -> "run", "stopp" -> "stop"; "fall" and "miss" are kept.
fn undouble(stem: &str) -> String {
    let chars: Vec<char> = stem.chars().collect();
    if let [.., a, b] = chars[..] {
        if a == b && "bdgmnprt".contains(b) {
            return chars[..chars.len() - 1].iter().collect();
        }
    }
    stem.to_string()
}

/// First two code points of a full tag, or the whole tag if shorter.
pub fn generalize_pos(full: &str) -> String {
    full.chars().take(2).collect()
}

/// Tokenizes, splits and tags raw text into corpus tokens and sentences.
pub fn annotate(text: &str) -> (Vec<Token>, Vec<Sentence>) {
    let spans = tokenize(text);
    let surfaces: Vec<&str> = spans.iter().map(|s| s.surface.as_str()).collect();
    let sentences = split_sentences(&surfaces, &Abbreviations::default());
    let tags = pos_tag(&surfaces);
    let tokens = spans
        .into_iter()
        .zip(tags)
        .map(|(span, pos)| Token {
            root: lemmatize(&span.surface, &pos),
            start: span.start,
            end: span.end,
            surface: span.surface,
            pos,
        })
        .collect();
    (tokens, sentences)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(text: &str) -> Vec<String> {
        tokenize(text).into_iter().map(|s| s.surface).collect()
    }

    #[test]
    fn tokenizes_plain_words() {
        assert_eq!(surfaces("back pain"), ["back", "pain"]);
        assert!(surfaces("").is_empty());
    }

    #[test]
    fn keeps_hyphenated_compounds() {
        assert_eq!(
            surfaces("superior-vena-caval obstruction"),
            ["superior-vena-caval", "obstruction"]
        );
        assert_eq!(surfaces("X-ray."), ["X-ray", "."]);
        assert_eq!(surfaces("2-3 cm"), ["2", "-", "3", "cm"]);
        assert_eq!(surfaces("left- sided"), ["left", "-", "sided"]);
    }

    #[test]
    fn offsets_count_code_points() {
        let spans = tokenize("né à Zürich");
        assert_eq!((spans[2].start, spans[2].end), (5, 11));
    }

    #[test]
    fn splits_two_sentences() {
        let toks = surfaces("A chest X-ray was normal . No sign of cancer .");
        let s = split_sentences(&toks, &Abbreviations::default());
        assert_eq!(
            s,
            vec![
                Sentence { first_token: 0, last_token: 5 },
                Sentence { first_token: 6, last_token: 10 },
            ]
        );
    }

    #[test]
    fn no_terminal_punctuation_is_one_sentence() {
        let toks = surfaces("pain in the left breast");
        assert_eq!(
            split_sentences(&toks, &Abbreviations::default()),
            vec![Sentence { first_token: 0, last_token: 4 }]
        );
        assert!(split_sentences::<&str>(&[], &Abbreviations::default()).is_empty());
    }

    #[test]
    fn abbreviations_and_initials_do_not_split() {
        let toks = surfaces("Seen by Dr . Smith and J . Doe today . Fine .");
        let s = split_sentences(&toks, &Abbreviations::default());
        assert_eq!(s.len(), 2);
        let custom = Abbreviations::parse("# none\n");
        assert_eq!(split_sentences(&toks, &custom).len(), 3);
    }

    #[test]
    fn tags_by_lexicon_and_rules() {
        let tags = pos_tag(&["shows", "cancer", "40", "mastectomies", "scanning", ".", "hydronephrosis"]);
        assert_eq!(tags, ["VBZ", "NN", "CD", "NNS", "VBG", ".", "NN"]);
    }

    #[test]
    fn custom_lexicon_overrides() {
        let t = Tagger::parse("cancer\tNNP\n");
        assert_eq!(t.tag_word("Cancer"), "NNP");
        assert_eq!(t.tag_word("shows"), "NNS");
    }

    #[test]
    fn lemmatizes_examples() {
        assert_eq!(lemmatize("mastectomies", "NNS"), "mastectomy");
        assert_eq!(lemmatize("pain", "NN"), "pain");
        assert_eq!(lemmatize("shows", "VBZ"), "show");
        assert_eq!(lemmatize("running", "VBG"), "run");
        assert_eq!(lemmatize("stopped", "VBD"), "stop");
        assert_eq!(lemmatize("Called", "VBD"), "call");
        assert_eq!(lemmatize("glass", "NNS"), "glass");
    }

    #[test]
    fn generalizes_tags() {
        assert_eq!(generalize_pos("VBZ"), "VB");
        assert_eq!(generalize_pos("NN"), "NN");
        assert_eq!(generalize_pos("."), ".");
        assert_eq!(PosTag::new("PRP$").generalized, "PR");
    }

    #[test]
    fn annotate_matches_token_invariants() {
        let (tokens, sentences) = annotate("A chest X-ray was normal. No sign of cancer.");
        assert_eq!(tokens.len(), 11);
        assert_eq!(sentences.len(), 2);
        assert_eq!(tokens[2].surface, "X-ray");
        assert_eq!(tokens[3].root, "was");
    }

    proptest! {
        #[test]
        fn spans_reconstruct_non_space_content(text in "[a-zA-Z0-9 \\-.,'éü]{0,40}") {
            let spans = tokenize(&text);
            let chars: Vec<char> = text.chars().collect();
            let mut prev = 0;
            for s in &spans {
                prop_assert!(s.start < s.end && s.start >= prev);
                prop_assert!(chars[prev..s.start].iter().all(|c| c.is_whitespace()));
                prop_assert_eq!(chars[s.start..s.end].iter().collect::<String>(), s.surface.clone());
                prev = s.end;
            }
            prop_assert!(chars[prev..].iter().all(|c| c.is_whitespace()));
        }

        #[test]
        fn sentences_partition_tokens(text in "[a-zA-Z .!?]{0,60}") {
            let toks: Vec<String> = tokenize(&text).into_iter().map(|s| s.surface).collect();
            let s = split_sentences(&toks, &Abbreviations::default());
            let mut next = 0;
            for sent in &s {
                prop_assert_eq!(sent.first_token, next);
                prop_assert!(sent.first_token <= sent.last_token);
                next = sent.last_token + 1;
            }
            prop_assert_eq!(next, toks.len());
        }

        #[test]
        fn lemmatize_is_idempotent(word in "[a-zA-Z]{0,12}", pos in prop::sample::select(vec!["NN", "NNS", "VBZ", "VBG", "VBD", "VBN", "JJ"])) {
            let once = lemmatize(&word, pos);
            prop_assert_eq!(lemmatize(&once, pos), once);
        }

        #[test]
        fn generalized_tag_is_short_prefix(tag in "\\PC{0,6}") {
            let g = generalize_pos(&tag);
            prop_assert!(g.chars().count() <= 2);
            prop_assert!(tag.starts_with(&g));
        }
    }
}
