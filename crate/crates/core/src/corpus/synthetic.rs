//! Random n-gram sets with a text-like shape, for scale runs.
//!
//! Words are random lowercase strings with English-like lengths. Each word
//! has a short, skewed successor list, so sentences wander through a sparse
//! graph the way book text does and the n-gram set is far smaller than the
//! set of all word sequences.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{extract_ngrams, NGramSet, Token};

/// Shape of a synthetic corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntheticShape {
    pub n: usize,
    /// Distinct n-grams to produce.
    pub target: usize,
    pub vocabulary: usize,
    /// Words that may open a sentence.
    pub openers: usize,
    /// Largest successor list of a word.
    pub max_successors: usize,
    pub seed: u64,
}

impl Default for SyntheticShape {
    fn default() -> Self {
        SyntheticShape {
            n: 5,
            target: 700_000,
            vocabulary: 3000,
            openers: 150,
            max_successors: 12,
            seed: 1,
        }
    }
}

/// Letters per word, one weight per length from 1 to 12.
const LENGTH_WEIGHTS: [u32; 12] = [3, 17, 20, 16, 11, 9, 8, 6, 4, 3, 2, 1];

/// Generates sentences of 9 to 20 words until `shape.target` distinct
/// position-typed n-grams exist, and returns the first `shape.target` of them.
pub fn synthetic_ngrams(shape: &SyntheticShape) -> NGramSet {
    let mut rng = ChaCha8Rng::seed_from_u64(shape.seed);
    let lengths = WeightedIndex::new(LENGTH_WEIGHTS).expect("positive weights");
    let mut vocab: Vec<Token> = Vec::with_capacity(shape.vocabulary);
    let mut seen = std::collections::HashSet::new();
    while vocab.len() < shape.vocabulary {
        let len = lengths.sample(&mut rng) + 1;
        let w: String = (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect();
        if seen.insert(w.clone()) {
            vocab.push(Token::new(w));
        }
    }
    // Zipf-like popularity decides who appears in successor lists.
    let popularity = WeightedIndex::new((1..=vocab.len()).map(|r| 1.0 / r as f64)).expect("positive weights");
    let successors: Vec<Vec<usize>> = (0..vocab.len())
        .map(|_| {
            let k = rng.gen_range(1..=shape.max_successors.max(1));
            let mut s: Vec<usize> = (0..k).map(|_| popularity.sample(&mut rng)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let openers: Vec<usize> = (0..shape.openers.max(1)).map(|_| popularity.sample(&mut rng)).collect();

    let mut out = NGramSet::new();
    let mut sentence = Vec::new();
    while out.len() < shape.target {
        sentence.clear();
        let mut w = *openers.choose(&mut rng).expect("openers");
        let len = rng.gen_range(9..=20);
        for _ in 0..len {
            sentence.push(vocab[w].clone());
            w = *successors[w].choose(&mut rng).expect("successors");
        }
        for g in extract_ngrams(&sentence, shape.n) {
            if out.len() == shape.target {
                break;
            }
            out.insert(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_size_and_reproducible() {
        let shape = SyntheticShape {
            target: 2000,
            vocabulary: 200,
            ..SyntheticShape::default()
        };
        let a = synthetic_ngrams(&shape);
        assert_eq!(a.len(), 2000);
        assert!(a.iter().all(|g| g.n() == 5));
        assert_eq!(a, synthetic_ngrams(&shape));
    }
}
