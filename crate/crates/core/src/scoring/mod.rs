//! Ranking sentences by perplexity.
//!
//! `PPL(w1..wn) = exp(-(1/n) Σ ln P(wi | w<i))`, lower is more fluent.

mod external;
mod markov;
mod rank;
pub mod stub;

pub use external::{external_score, HttpScorer, SubprocessScorer};
pub use markov::{train_markov, MarkovModel, BOS, EOS, UNK};
pub use rank::{score_and_rank, PplBand, PplBands, ScoredSentence, Scorer};

/// A language model given as conditional word probabilities.
pub trait ConditionalModel {
    /// `ln P(word | history)`, where `history` holds every earlier word of
    /// the sentence.
    fn log_prob(&self, history: &[&str], word: &str) -> f64;
}

/// Perplexity of `words` under `model`, accumulated in log space. Returns
/// `None` for an empty sentence.
pub fn perplexity<M: ConditionalModel + ?Sized, S: AsRef<str>>(model: &M, words: &[S]) -> Option<f64> {
    if words.is_empty() {
        return None;
    }
    let words: Vec<&str> = words.iter().map(AsRef::as_ref).collect();
    let total: f64 = (0..words.len()).map(|i| model.log_prob(&words[..i], words[i])).sum();
    Some((-total / words.len() as f64).exp())
}

/// Joins words into the display text of a sentence, final period included.
pub fn sentence_text<S: AsRef<str>>(words: &[S]) -> String {
    let mut text = words.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" ");
    text.push('.');
    text
}
