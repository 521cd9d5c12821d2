//! From raw book text to a filtered set of position-typed n-grams.

mod extract;
mod filter;
mod lexicon;
mod ngram;
mod segment;
mod synthetic;
mod tokenize;

pub use extract::{extract_corpus, extract_text, Extraction, ExtractionReport, SourceText};
pub use filter::{filter_sentence, FilterReason, FilterReport};
pub use lexicon::{build_lexicon, CasePolicy, Lexicon};
pub use ngram::{extract_ngrams, read_ngrams, write_ngrams, NGram, NGramSet, Position};
pub use segment::{segment_sentences, RawSentence};
pub use synthetic::{synthetic_ngrams, SyntheticShape};
pub use tokenize::{tokenize, Token};

/// Marks that can end a sentence.
pub(crate) fn is_terminal_mark(c: char) -> bool {
    matches!(c, '.' | '?' | '!' | '…')
}

/// Maps typographic apostrophes to the ASCII one so lexicon lookups agree.
pub(crate) fn normalize_apostrophes(s: &str) -> String {
    s.replace(['\u{2019}', '\u{02BC}'], "'")
}
