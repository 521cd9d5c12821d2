//! Compiling the n-gram trie into the MDD of all valid sentences.
//!
//! A sentence of `L` words over an order-`n` trie is valid when
//!
//! * `n ≤ L`, `min_words ≤ L ≤ max_words`;
//! * its first window of `n` words is an initial n-gram, its last window a
//!   final n-gram and every window in between a middle n-gram (a sentence
//!   of exactly `n` words needs its window to be both initial and final);
//! * its characters plus inter-word spaces add up to `char_budget`;
//! * it splits into exactly `n_lines` non-empty lines, each of which can be
//!   justified to the box width;
//! * its last word is not a non-terminal word.
//!
//! Shorter sentences are padded with ε up to `max_words` labels.

mod intersection;
mod stats;
mod unfold;

use std::sync::Arc;

pub use intersection::{compile_via_intersection, display_mdd, length_mdd, char_budget_mdd, succession_mdd};
pub use stats::{peak_rss_bytes, reset_peak_rss, stats, CompileStats};
pub use unfold::{unfold, unfold_traced};

use crate::error::{Error, Result};
use crate::mdd::{Label, LabelId, LabelTable, Mdd};
use crate::rules::{FontMetrics, RuleConfig};
use crate::trie::MddTrie;

/// Per-label data shared by both compilation methods.
pub(crate) struct Alphabet {
    pub labels: Arc<LabelTable>,
    pub epsilon: LabelId,
    /// Word label ids in ascending order.
    pub words: Vec<LabelId>,
    pub char_len: Vec<i64>,
    pub width: Vec<i64>,
    pub non_terminal: Vec<bool>,
    pub period_width: i64,
    pub cfg: RuleConfig,
}

impl Alphabet {
    /// Extends the trie's label table with ε, resolves font directives and
    /// checks that every word can be measured.
    pub fn new(trie: &MddTrie, cfg: &RuleConfig, fonts: &FontMetrics) -> Result<Alphabet> {
        if trie.order() < 2 {
            return Err(Error::Config("n-gram order must be at least 2".into()));
        }
        let cfg = cfg.resolved(fonts);
        cfg.validate()?;
        let mut table = (**trie.labels()).clone();
        let epsilon = table.intern(Label::Epsilon);
        let size = table.len();
        let mut out = Alphabet {
            labels: Arc::new(table),
            epsilon,
            words: Vec::new(),
            char_len: vec![0; size],
            width: vec![0; size],
            non_terminal: vec![false; size],
            period_width: 0,
            cfg,
        };
        for (id, label) in trie.labels().iter() {
            let Some(word) = label.as_word() else { continue };
            let width = fonts
                .word_width(word)
                .map_err(|c| Error::Config(format!("font has no width for {c:?} (in {word:?})")))?;
            out.words.push(id);
            out.char_len[id.index()] = word.chars().count() as i64;
            out.width[id.index()] = i64::from(width);
            out.non_terminal[id.index()] = out.cfg.is_non_terminal(word);
        }
        if out.cfg.period_in_last_line {
            out.period_width = fonts
                .char_width('.')
                .map(i64::from)
                .ok_or_else(|| Error::Config("font has no width for '.'".into()))?;
        }
        Ok(out)
    }

    pub fn empty_result(&self) -> Mdd {
        Mdd::empty(self.cfg.max_words, self.labels.clone())
    }

    /// Shortest and longest word in characters.
    pub fn length_range(&self) -> (i64, i64) {
        let lens = self.words.iter().map(|w| self.char_len[w.index()]);
        (lens.clone().min().unwrap_or(0), lens.max().unwrap_or(0))
    }
}
