use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::is_terminal_mark;

/// One sentence cut from a source text, terminal mark included.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RawSentence {
    pub text: String,
    pub source_id: String,
    /// Position of the sentence within its source, from 0.
    pub index: usize,
}

impl RawSentence {
    pub fn new(text: impl Into<String>) -> Self {
        RawSentence {
            text: text.into(),
            source_id: String::new(),
            index: 0,
        }
    }
}

/// Splits NFC-normalized text into sentences.
///
/// A run of `.`, `?`, `!` or `…` followed by whitespace or the end of input
/// closes a sentence, except an ellipsis (`…` or two or more dots), which
/// stays inside the sentence so the filter can reject it. Internal
/// whitespace is collapsed to single spaces. Trailing text without a
/// terminal mark is dropped.
pub fn segment_sentences(text: &str, source_id: &str) -> Vec<RawSentence> {
    let text: String = text.nfc().collect();
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut current = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            if !current.is_empty() && !current.ends_with(' ') {
                current.push(' ');
            }
            i += 1;
            continue;
        }
        if !is_terminal_mark(c) {
            current.push(c);
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && is_terminal_mark(chars[i]) {
            i += 1;
        }
        let run: String = chars[start..i].iter().collect();
        current.push_str(&run);
        let at_boundary = i == chars.len() || chars[i].is_whitespace();
        let ellipsis = run.contains('…') || run.chars().filter(|&c| c == '.').count() >= 2;
        if at_boundary && !ellipsis {
            let sentence = current.trim().to_owned();
            current.clear();
            if sentence.chars().any(|c| !is_terminal_mark(c)) {
                out.push(RawSentence {
                    text: sentence,
                    source_id: source_id.to_owned(),
                    index: out.len(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<String> {
        segment_sentences(s, "t").into_iter().map(|s| s.text).collect()
    }

    #[test]
    fn two_marks() {
        assert_eq!(texts("He ran. She laughed!"), ["He ran.", "She laughed!"]);
    }

    #[test]
    fn empty_input() {
        assert!(texts("").is_empty());
        assert!(texts("  \n ").is_empty());
    }

    #[test]
    fn ellipsis_stays_inside() {
        assert_eq!(texts("A dog... barked."), ["A dog... barked."]);
        assert_eq!(texts("A dog… barked. Then quiet."), ["A dog… barked.", "Then quiet."]);
    }

    #[test]
    fn whitespace_collapsed_and_fragment_dropped() {
        assert_eq!(texts("The  cat\n sleeps.\n\nAnd then"), ["The cat sleeps."]);
    }

    #[test]
    fn indices_and_source() {
        let s = segment_sentences("A b. C d? E f.", "book");
        assert_eq!(s.iter().map(|s| s.index).collect::<Vec<_>>(), [0, 1, 2]);
        assert!(s.iter().all(|s| s.source_id == "book"));
    }

    #[test]
    fn composed_form() {
        let decomposed = "E\u{301}te\u{301} chaud.";
        assert_eq!(texts(decomposed), ["Été chaud."]);
    }
}
