//! Constrained standardized sentence generation with multi-valued decision
//! diagrams.
//!
//! The pipeline turns a corpus of books into typed n-grams, stores them in
//! fixed-depth MDD tries, unfolds the tries into a solution MDD whose paths
//! are exactly the sentences meeting the word-count, character-budget and
//! justified-display rules, and finally ranks the enumerated sentences by
//! perplexity.
//!
//! ```
//! use mnread_mdd::mdd::Mdd;
//!
//! let mdd = Mdd::sum(&[vec![1, 3, 7], vec![0, 2, 4], vec![2, 3, 4]], 5, 9);
//! assert_eq!(mdd.count_paths(), 15u32.into());
//! ```

pub mod compile;
pub mod corpus;
pub mod error;
pub mod mdd;
pub mod pipeline;
pub mod rules;
pub mod scoring;
pub mod trie;

pub use error::{Error, Result};
