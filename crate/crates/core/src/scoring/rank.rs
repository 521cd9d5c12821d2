use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{perplexity, sentence_text, MarkovModel};
use crate::error::{Error, Result};

/// Anything that maps sentences to perplexities, in input order.
pub trait Scorer: Sync {
    /// Identifies the scorer and model version in output records.
    fn scorer_id(&self) -> String;

    fn score_batch(&self, sentences: &[Vec<String>]) -> Result<Vec<f64>>;
}

impl Scorer for MarkovModel {
    fn scorer_id(&self) -> String {
        self.id_string()
    }

    fn score_batch(&self, sentences: &[Vec<String>]) -> Result<Vec<f64>> {
        sentences
            .par_iter()
            .map(|s| {
                perplexity(self, s).ok_or_else(|| Error::Scoring {
                    index: None,
                    message: "empty sentence".into(),
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub rank: usize,
    pub ppl: f64,
    pub text: String,
    pub words: Vec<String>,
    pub scorer_id: String,
}

/// Report thresholds on perplexity. They depend on corpus and model and
/// are never used to filter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PplBands {
    pub good_below: f64,
    pub fair_below: f64,
}

impl Default for PplBands {
    fn default() -> Self {
        PplBands {
            good_below: 15.0,
            fair_below: 30.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PplBand {
    Good,
    Fair,
    Poor,
}

impl fmt::Display for PplBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PplBand::Good => "good",
            PplBand::Fair => "fair",
            PplBand::Poor => "poor",
        })
    }
}

impl PplBands {
    pub fn band(&self, ppl: f64) -> PplBand {
        if ppl < self.good_below {
            PplBand::Good
        } else if ppl < self.fair_below {
            PplBand::Fair
        } else {
            PplBand::Poor
        }
    }
}

/// Scores in batches and sorts by ascending perplexity, ties broken by the
/// sentence text. Ranks start at 1. A failing or non-finite score is
/// reported with the index of its sentence in `sentences`.
pub fn score_and_rank(sentences: &[Vec<String>], scorer: &dyn Scorer, batch_size: usize) -> Result<Vec<ScoredSentence>> {
    let mut scored = Vec::with_capacity(sentences.len());
    for (b, batch) in sentences.chunks(batch_size.max(1)).enumerate() {
        let base = b * batch_size.max(1);
        let ppls = scorer.score_batch(batch).map_err(|e| match e {
            Error::Scoring { index, message } => Error::Scoring {
                index: index.map(|i| base + i),
                message,
            },
            other => other,
        })?;
        if ppls.len() != batch.len() {
            return Err(Error::Protocol(format!("{} scores for {} sentences", ppls.len(), batch.len())));
        }
        for (i, (words, ppl)) in batch.iter().zip(ppls).enumerate() {
            if !ppl.is_finite() || ppl <= 0.0 {
                return Err(Error::Scoring {
                    index: Some(base + i),
                    message: format!("perplexity {ppl} is not a positive finite number"),
                });
            }
            scored.push(ScoredSentence {
                rank: 0,
                ppl,
                text: sentence_text(words),
                words: words.clone(),
                scorer_id: String::new(),
            });
        }
    }
    // Remote scorers learn their model name from the first response.
    let id = scorer.scorer_id();
    for s in &mut scored {
        s.scorer_id.clone_from(&id);
    }
    scored.sort_by(|a, b| a.ppl.total_cmp(&b.ppl).then_with(|| a.text.cmp(&b.text)));
    for (i, s) in scored.iter_mut().enumerate() {
        s.rank = i + 1;
    }
    Ok(scored)
}
