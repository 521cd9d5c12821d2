use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{extract_ngrams, filter_sentence, segment_sentences, tokenize, FilterReason, Lexicon, NGramSet, Position, Token};
use crate::error::{Error, Result};
use crate::rules::RuleConfig;

/// One book or file of the corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceText {
    pub source_id: String,
    pub text: String,
}

impl SourceText {
    pub fn new(source_id: impl Into<String>, text: impl Into<String>) -> Self {
        SourceText {
            source_id: source_id.into(),
            text: text.into(),
        }
    }

    /// Every `.txt` file directly inside `dir`, sorted by file name.
    pub fn read_dir(dir: &Path) -> Result<Vec<SourceText>> {
        let mut paths = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(Error::file(dir))? {
            let path = entry.map_err(Error::file(dir))?.path();
            if path.is_file() && path.extension().is_some_and(|e| e == "txt") {
                paths.push(path);
            }
        }
        paths.sort();
        paths
            .into_iter()
            .map(|p| {
                let text = std::fs::read_to_string(&p).map_err(Error::file(&p))?;
                let id = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                Ok(SourceText::new(id, text))
            })
            .collect()
    }
}

/// Counts gathered while extracting n-grams.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionReport {
    pub sources: usize,
    pub sentences: usize,
    pub accepted: usize,
    /// Rejected sentence count per reason.
    pub rejected: BTreeMap<FilterReason, usize>,
    /// Accepted sentences shorter than the n-gram order.
    pub shorter_than_n: usize,
    /// Distinct n-grams per position.
    pub ngrams: BTreeMap<Position, usize>,
}

/// Everything extracted from one source.
#[derive(Clone, Debug, Default)]
pub struct Extraction {
    pub ngrams: NGramSet,
    /// Tokens of every accepted sentence, in corpus order.
    pub sentences: Vec<Vec<Token>>,
    pub report: ExtractionReport,
}

/// Segments, filters and tokenizes one source and collects its n-grams.
pub fn extract_text(source: &SourceText, lex: &Lexicon, cfg: &RuleConfig, n: usize) -> Extraction {
    let mut out = Extraction::default();
    out.report.sources = 1;
    for sentence in segment_sentences(&source.text, &source.source_id) {
        out.report.sentences += 1;
        let verdict = filter_sentence(&sentence, lex, cfg);
        if !verdict.accepted {
            *out.report.rejected.entry(verdict.reason).or_default() += 1;
            continue;
        }
        let Ok(tokens) = tokenize(&sentence, cfg) else {
            *out.report.rejected.entry(FilterReason::ForbiddenPunctuation).or_default() += 1;
            continue;
        };
        out.report.accepted += 1;
        if tokens.len() < n {
            out.report.shorter_than_n += 1;
        }
        out.ngrams.extend(extract_ngrams(&tokens, n));
        out.sentences.push(tokens);
    }
    out
}

/// Processes sources in parallel and merges the results in source order,
/// so the output does not depend on scheduling.
pub fn extract_corpus(sources: &[SourceText], lex: &Lexicon, cfg: &RuleConfig, n: usize) -> Extraction {
    let parts: Vec<Extraction> = sources.par_iter().map(|s| extract_text(s, lex, cfg, n)).collect();
    let mut merged = Extraction::default();
    for part in parts {
        merged.ngrams.extend(part.ngrams);
        merged.sentences.extend(part.sentences);
        let r = &mut merged.report;
        r.sources += part.report.sources;
        r.sentences += part.report.sentences;
        r.accepted += part.report.accepted;
        r.shorter_than_n += part.report.shorter_than_n;
        for (reason, count) in part.report.rejected {
            *r.rejected.entry(reason).or_default() += count;
        }
    }
    for g in &merged.ngrams {
        *merged.report.ngrams.entry(g.position).or_default() += 1;
    }
    merged
}
