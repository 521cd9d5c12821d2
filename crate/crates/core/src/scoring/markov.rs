use std::collections::HashMap;

use indexmap::IndexSet;

use super::ConditionalModel;
use crate::error::{Error, Result};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

/// An order-`k` Markov model with additive smoothing:
/// `P(w | ctx) = (c(ctx, w) + α) / (c(ctx) + α·V)`, where `ctx` is the last
/// `k` words (padded with `<s>`) and `V` counts the training words plus
/// `</s>` and `<unk>`.
#[derive(Clone, Debug)]
pub struct MarkovModel {
    order: usize,
    alpha: f64,
    words: IndexSet<String>,
    counts: HashMap<Box<[u32]>, Context>,
}

#[derive(Clone, Debug, Default)]
struct Context {
    total: u64,
    next: HashMap<u32, u64>,
}

/// Counts every context of `k` words in the tokenized sentences.
pub fn train_markov<I, S, W>(sentences: I, k: usize, alpha: f64) -> Result<MarkovModel>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[W]>,
    W: AsRef<str>,
{
    if k == 0 {
        return Err(Error::Config("Markov order must be at least 1".into()));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Config(format!("smoothing alpha must be positive, got {alpha}")));
    }
    let mut model = MarkovModel {
        order: k,
        alpha,
        words: IndexSet::new(),
        counts: HashMap::new(),
    };
    let bos = model.words.insert_full(BOS.to_owned()).0 as u32;
    model.words.insert(EOS.to_owned());
    model.words.insert(UNK.to_owned());
    let mut any = false;
    let mut padded = Vec::new();
    for sentence in sentences {
        let sentence = sentence.as_ref();
        if sentence.is_empty() {
            continue;
        }
        any = true;
        padded.clear();
        padded.resize(k, bos);
        for w in sentence {
            padded.push(model.words.insert_full(w.as_ref().to_owned()).0 as u32);
        }
        padded.push(model.id(EOS));
        for i in k..padded.len() {
            let ctx = model.counts.entry(padded[i - k..i].into()).or_default();
            ctx.total += 1;
            *ctx.next.entry(padded[i]).or_default() += 1;
        }
    }
    if !any {
        return Err(Error::EmptyCorpus);
    }
    Ok(model)
}

impl MarkovModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of outcomes a context distributes probability over.
    pub fn vocab_size(&self) -> usize {
        // Every interned word except the start padding.
        self.words.len() - 1
    }

    /// The outcomes: training words, `</s>` and `<unk>`.
    pub fn vocabulary(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str).filter(|w| *w != BOS)
    }

    fn id(&self, w: &str) -> u32 {
        match self.words.get_index_of(w) {
            Some(i) if w != BOS => i as u32,
            _ => self.words.get_index_of(UNK).expect("interned") as u32,
        }
    }

    /// `P(word | context)` for a context of exactly `order` words.
    pub fn prob(&self, context: &[&str], word: &str) -> f64 {
        let ctx: Box<[u32]> = context
            .iter()
            .map(|w| if *w == BOS { 0 } else { self.id(w) })
            .collect();
        let (count, total) = self
            .counts
            .get(&ctx)
            .map(|c| (c.next.get(&self.id(word)).copied().unwrap_or(0), c.total))
            .unwrap_or((0, 0));
        (count as f64 + self.alpha) / (total as f64 + self.alpha * self.vocab_size() as f64)
    }

    /// The last `order` words of `history`, padded with `<s>`.
    pub fn context<'a>(&self, history: &[&'a str]) -> Vec<&'a str> {
        let take = history.len().min(self.order);
        let mut ctx = vec![BOS; self.order - take];
        ctx.extend_from_slice(&history[history.len() - take..]);
        ctx
    }

    /// Identifier recorded with every score, including the parameters.
    pub fn id_string(&self) -> String {
        format!("markov-k{}-a{}-v{}", self.order, self.alpha, self.vocab_size())
    }
}

impl ConditionalModel for MarkovModel {
    fn log_prob(&self, history: &[&str], word: &str) -> f64 {
        self.prob(&self.context(history), word).ln()
    }
}
