use std::fmt;

use serde::{Deserialize, Serialize};

use super::{is_terminal_mark, tokenize, Lexicon, RawSentence};
use crate::rules::RuleConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterReason {
    Ok,
    NotDeclarative,
    ForbiddenPunctuation,
    ProperNoun,
    OutOfLexicon,
    TooShort,
}

impl FilterReason {
    pub const ALL: [FilterReason; 6] = [
        FilterReason::Ok,
        FilterReason::NotDeclarative,
        FilterReason::ForbiddenPunctuation,
        FilterReason::ProperNoun,
        FilterReason::OutOfLexicon,
        FilterReason::TooShort,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FilterReason::Ok => "ok",
            FilterReason::NotDeclarative => "not_declarative",
            FilterReason::ForbiddenPunctuation => "forbidden_punctuation",
            FilterReason::ProperNoun => "proper_noun",
            FilterReason::OutOfLexicon => "out_of_lexicon",
            FilterReason::TooShort => "too_short",
        }
    }
}

impl fmt::Display for FilterReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub accepted: bool,
    pub reason: FilterReason,
}

impl FilterReport {
    fn of(reason: FilterReason) -> Self {
        FilterReport {
            accepted: reason == FilterReason::Ok,
            reason,
        }
    }
}

/// Applies the grammatical-form and lexicon rules to one sentence. Checks
/// run in a fixed order and the first failure is reported.
pub fn filter_sentence(s: &RawSentence, lex: &Lexicon, cfg: &RuleConfig) -> FilterReport {
    FilterReport::of(classify(s, lex, cfg))
}

fn classify(s: &RawSentence, lex: &Lexicon, cfg: &RuleConfig) -> FilterReason {
    let text = s.text.trim();
    if text.ends_with(['?', '!']) {
        return FilterReason::NotDeclarative;
    }
    let body = text.strip_suffix('.').unwrap_or(text);
    if body.chars().any(|c| is_terminal_mark(c) || cfg.forbidden_punct.contains(&c)) {
        return FilterReason::ForbiddenPunctuation;
    }
    let tokens = match tokenize(s, cfg) {
        Ok(tokens) => tokens,
        Err(_) => return FilterReason::ForbiddenPunctuation,
    };
    if tokens.is_empty() {
        return FilterReason::TooShort;
    }
    let proper = tokens.iter().skip(1).any(|t| {
        t.surface.chars().next().is_some_and(char::is_uppercase) && !lex.resolves(&t.surface.to_lowercase())
    });
    if proper {
        return FilterReason::ProperNoun;
    }
    if !tokens.iter().all(|t| lex.resolves(&t.surface)) {
        return FilterReason::OutOfLexicon;
    }
    FilterReason::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reason(text: &str, lex: &Lexicon) -> FilterReason {
        filter_sentence(&RawSentence::new(text), lex, &RuleConfig::default()).reason
    }

    fn lex() -> Lexicon {
        let mut lex = Lexicon::new(["the", "cat", "sleep", "you", "shouldn't", "do", "magic", "with", "rose"]);
        lex.add_inflection("sleeps", "sleep").unwrap();
        lex
    }

    #[test]
    fn reasons() {
        let lex = lex();
        assert_eq!(reason("She laughed!", &lex), FilterReason::NotDeclarative);
        assert_eq!(reason("Is it?", &lex), FilterReason::NotDeclarative);
        assert_eq!(reason("The cat sleeps.", &lex), FilterReason::Ok);
        assert_eq!(reason("You shouldn't do ma... magic...", &lex), FilterReason::ForbiddenPunctuation);
        assert_eq!(reason("The cat: sleeps.", &lex), FilterReason::ForbiddenPunctuation);
        assert_eq!(reason("The cat sleeps with Tom.", &lex), FilterReason::ProperNoun);
        assert_eq!(reason("The cat sleeps with Rose.", &lex), FilterReason::Ok);
        assert_eq!(reason("The dog sleeps.", &lex), FilterReason::OutOfLexicon);
        assert_eq!(reason(".", &lex), FilterReason::TooShort);
    }

    #[test]
    fn accepted_iff_ok() {
        let lex = lex();
        for text in ["She laughed!", "The cat sleeps.", "The dog sleeps."] {
            let r = filter_sentence(&RawSentence::new(text), &lex, &RuleConfig::default());
            assert_eq!(r.accepted, r.reason == FilterReason::Ok);
        }
    }

    #[test]
    fn unrestricted_lexicon_accepts_names() {
        assert_eq!(reason("The cat sleeps with Tom.", &Lexicon::unrestricted()), FilterReason::Ok);
    }
}
