use std::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::{is_terminal_mark, normalize_apostrophes, RawSentence};
use crate::error::{Error, Result};
use crate::rules::{ApostrophePolicy, RuleConfig};

/// A word as it appears in a sentence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub char_len: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let char_len = surface.chars().count();
        Token { surface, char_len }
    }

    pub fn as_str(&self) -> &str {
        &self.surface
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.surface
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

/// Splits a sentence into words: whitespace-delimited, final mark removed,
/// apostrophes handled per `cfg.apostrophe_policy`.
pub fn tokenize(s: &RawSentence, cfg: &RuleConfig) -> Result<Vec<Token>> {
    let text: String = normalize_apostrophes(&s.text.nfc().collect::<String>());
    let body = text.trim_end();
    let body = body.strip_suffix(is_terminal_mark).unwrap_or(body);
    let mut out = Vec::new();
    for word in body.split_whitespace() {
        if let Some(bad) = word.chars().find(|&c| cfg.forbidden_punct.contains(&c) || is_terminal_mark(c)) {
            return Err(Error::Tokenization {
                token: word.to_owned(),
                reason: format!("forbidden character {bad:?}"),
            });
        }
        match cfg.apostrophe_policy {
            ApostrophePolicy::KeepElided => out.push(Token::new(word)),
            ApostrophePolicy::SplitElided => {
                let mut rest = word;
                while let Some(at) = rest.find('\'') {
                    let (head, tail) = rest.split_at(at + 1);
                    out.push(Token::new(head));
                    rest = tail;
                }
                if !rest.is_empty() {
                    out.push(Token::new(rest));
                }
            }
        }
    }
    Ok(out)
}
