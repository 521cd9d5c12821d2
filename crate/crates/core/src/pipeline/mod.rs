//! The generation pipeline as separate stages over on-disk artifacts.
//!
//! Each stage writes its outputs plus `<stage>.manifest.json` into
//! `out_dir`. A manifest records the SHA-256 of every output, and the next
//! stage refuses inputs whose hash no longer matches.

mod config;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{CompileMethod, PipelineConfig, ScorerKind, ScoringConfig};

use crate::compile::{compile_via_intersection, stats, unfold_traced, CompileStats};
use crate::corpus::{build_lexicon, extract_corpus, read_ngrams, tokenize, write_ngrams, Lexicon, Position, RawSentence, SourceText};
use crate::error::{Error, Result};
use crate::mdd::{LabelId, Mdd};
use crate::rules::{check_sentence, FontMetrics, SentenceVerdict};
use crate::scoring::{score_and_rank, sentence_text, train_markov, HttpScorer, PplBand, ScoredSentence, Scorer, SubprocessScorer};
use crate::trie::MddTrie;

pub const NGRAMS_FILE: &str = "ngrams.tsv";
pub const TRIE_DIR: &str = "trie";
pub const SOLUTIONS_FILE: &str = "solutions.mdd";
pub const SENTENCES_FILE: &str = "sentences.txt";
pub const SCORES_FILE: &str = "scores.jsonl";

/// What a stage consumed and produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageManifest {
    pub stage: String,
    pub tool_version: String,
    pub config_hash: String,
    pub corpus_hash: Option<String>,
    /// Artifact name to SHA-256 of what was read.
    pub inputs: BTreeMap<String, String>,
    /// Artifact name to SHA-256 of what was written.
    pub outputs: BTreeMap<String, String>,
    pub stats: serde_json::Value,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub elapsed_ms: u128,
}

/// Trie size figures per position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrieStats {
    pub n: usize,
    pub labels: usize,
    pub positions: BTreeMap<Position, SizeStats>,
    pub total: SizeStats,
    /// Nodes of the three tries before reduction.
    pub unreduced_nodes: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub arcs: usize,
    pub nodes: usize,
    /// Decimal path count.
    pub paths: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompileReport {
    pub method: CompileMethod,
    #[serde(flatten)]
    pub stats: CompileStats,
    /// States per level; empty for the intersection method.
    pub frontier: Vec<usize>,
}

/// One line of a `validate` report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub line: usize,
    pub text: String,
    pub pass: bool,
    pub error: Option<String>,
    pub verdict: Option<SentenceVerdict>,
}

/// A score record as written to `scores.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    #[serde(flatten)]
    pub scored: ScoredSentence,
    pub band: PplBand,
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub cfg: PipelineConfig,
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Self {
        Pipeline { cfg }
    }

    pub fn load(config: &Path) -> Result<Self> {
        PipelineConfig::load(config).map(Pipeline::new)
    }

    pub fn artifact(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    pub fn lexicon(&self) -> Result<Lexicon> {
        match &self.cfg.lemmas {
            Some(lemmas) => build_lexicon(lemmas, self.cfg.inflections.as_deref()),
            None => Ok(Lexicon::unrestricted()),
        }
    }

    pub fn sources(&self) -> Result<Vec<SourceText>> {
        SourceText::read_dir(&self.cfg.corpus_dir)
    }

    pub fn fonts(&self) -> Result<FontMetrics> {
        let path = self
            .cfg
            .font
            .as_deref()
            .ok_or_else(|| Error::Config("`font` is required for this stage".into()))?;
        FontMetrics::load(path)
    }

    fn corpus_hash(sources: &[SourceText]) -> String {
        let mut h = Sha256::new();
        for s in sources {
            h.update(s.source_id.as_bytes());
            h.update([0]);
            h.update(Sha256::digest(s.text.as_bytes()));
        }
        hex::encode(h.finalize())
    }

    fn manifest(&self, stage: &str, corpus_hash: Option<String>, started: Instant) -> StageManifest {
        StageManifest {
            stage: stage.to_owned(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            config_hash: self.cfg.config_hash(),
            corpus_hash,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            stats: serde_json::Value::Null,
            warnings: Vec::new(),
            elapsed_ms: started.elapsed().as_millis(),
        }
    }

    fn write_manifest(&self, m: &mut StageManifest, started: Instant) -> Result<()> {
        m.elapsed_ms = started.elapsed().as_millis();
        let path = self.artifact(&format!("{}.manifest.json", m.stage));
        let json = serde_json::to_string_pretty(m).expect("manifest encodes");
        fs::write(&path, json + "\n").map_err(Error::file(&path))
    }

    pub fn read_manifest(&self, stage: &str) -> Result<StageManifest> {
        let path = self.artifact(&format!("{stage}.manifest.json"));
        let text = fs::read_to_string(&path)
            .map_err(|_| Error::Config(format!("{} not found; run `{stage}` first", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path.display().to_string(), e.line(), e.to_string()))
    }

    /// Hash of `name` as recorded by `stage`, checked against the file.
    fn verified_input(&self, stage: &str, name: &str) -> Result<String> {
        let manifest = self.read_manifest(stage)?;
        if manifest.config_hash != self.cfg.config_hash() {
            return Err(Error::Config(format!(
                "{name} was produced under a different configuration; rerun `{stage}`"
            )));
        }
        let recorded = manifest
            .outputs
            .get(name)
            .ok_or_else(|| Error::Config(format!("{stage} manifest does not list {name}")))?;
        let path = self.artifact(name);
        if &sha256_file(&path)? != recorded {
            return Err(Error::HashMismatch { path });
        }
        Ok(recorded.clone())
    }

    fn ensure_out_dir(&self) -> Result<()> {
        fs::create_dir_all(&self.cfg.out_dir).map_err(Error::file(&self.cfg.out_dir))
    }

    /// Corpus to filtered n-gram file.
    pub fn extract(&self) -> Result<StageManifest> {
        let started = Instant::now();
        self.ensure_out_dir()?;
        let sources = self.sources()?;
        let lex = self.lexicon()?;
        let extraction = extract_corpus(&sources, &lex, &self.cfg.rules, self.cfg.n);
        let path = self.artifact(NGRAMS_FILE);
        let mut bytes = Vec::new();
        write_ngrams(&mut bytes, &extraction.ngrams)?;
        fs::write(&path, &bytes).map_err(Error::file(&path))?;

        let mut m = self.manifest("extract", Some(Self::corpus_hash(&sources)), started);
        m.outputs.insert(NGRAMS_FILE.into(), sha256_bytes(&bytes));
        m.stats = serde_json::to_value(&extraction.report).expect("report encodes");
        if sources.is_empty() {
            m.warnings.push(format!("no .txt files in {}", self.cfg.corpus_dir.display()));
        }
        if extraction.ngrams.is_empty() {
            m.warnings.push("no n-grams extracted".into());
        }
        self.write_manifest(&mut m, started)?;
        Ok(m)
    }

    /// N-gram file to trie bundle.
    pub fn build_trie(&self) -> Result<StageManifest> {
        let started = Instant::now();
        let input = self.verified_input("extract", NGRAMS_FILE)?;
        let path = self.artifact(NGRAMS_FILE);
        let file = fs::File::open(&path).map_err(Error::file(&path))?;
        let (n, grams) = read_ngrams(std::io::BufReader::new(file), &path.display().to_string())?;
        if n != 0 && n != self.cfg.n {
            return Err(Error::Config(format!("{} holds {n}-grams but n = {}", path.display(), self.cfg.n)));
        }
        let trie = MddTrie::build(self.cfg.n, &grams)?;
        let unreduced = MddTrie::prefix_tree_nodes(self.cfg.n, &grams)?;
        let bundle = trie.save(&self.artifact(TRIE_DIR))?;

        let mut positions = BTreeMap::new();
        let mut total = SizeStats::default();
        let mut paths = BigUint::default();
        for (p, f) in &bundle.files {
            positions.insert(
                *p,
                SizeStats {
                    arcs: f.arcs,
                    nodes: f.nodes,
                    paths: f.paths.clone(),
                },
            );
            total.arcs += f.arcs;
            total.nodes += f.nodes;
            paths += trie.trie(*p).count_paths();
        }
        total.paths = paths.to_string();
        let stats = TrieStats {
            n: self.cfg.n,
            labels: trie.labels().len(),
            positions,
            total,
            unreduced_nodes: unreduced,
        };

        let mut m = self.manifest("build-trie", None, started);
        m.inputs.insert(NGRAMS_FILE.into(), input);
        let manifest_path = self.artifact(TRIE_DIR).join("manifest.json");
        m.outputs.insert(format!("{TRIE_DIR}/manifest.json"), sha256_file(&manifest_path)?);
        m.stats = serde_json::to_value(&stats).expect("stats encode");
        if trie.is_empty() {
            m.warnings.push("trie is empty".into());
        }
        self.write_manifest(&mut m, started)?;
        Ok(m)
    }

    fn load_trie(&self) -> Result<(String, MddTrie)> {
        let name = format!("{TRIE_DIR}/manifest.json");
        let hash = self.verified_input("build-trie", &name)?;
        Ok((hash, MddTrie::load(&self.artifact(TRIE_DIR))?))
    }

    /// Trie bundle to solution MDD.
    pub fn compile(&self) -> Result<StageManifest> {
        let started = Instant::now();
        let (input, trie) = self.load_trie()?;
        let fonts = self.fonts()?;
        let (mdd, frontier) = match self.cfg.compile_method {
            CompileMethod::Unfold => unfold_traced(&trie, &self.cfg.rules, &fonts)?,
            CompileMethod::Intersection => (compile_via_intersection(&trie, &self.cfg.rules, &fonts)?, Vec::new()),
        };
        let violations = mdd.validate();
        if !violations.is_empty() {
            return Err(Error::Invariant(format!("compiled MDD is malformed: {}", violations[0])));
        }
        let path = self.artifact(SOLUTIONS_FILE);
        let mut bytes = Vec::new();
        mdd.write_to(&mut bytes)?;
        fs::write(&path, &bytes).map_err(Error::file(&path))?;

        let report = CompileReport {
            method: self.cfg.compile_method,
            stats: stats(&mdd, started.elapsed()),
            frontier,
        };
        let corpus = self.read_manifest("extract").ok().and_then(|m| m.corpus_hash);
        let mut m = self.manifest("compile", corpus, started);
        m.inputs.insert(format!("{TRIE_DIR}/manifest.json"), input);
        m.outputs.insert(SOLUTIONS_FILE.into(), sha256_bytes(&bytes));
        m.stats = serde_json::to_value(&report).expect("report encodes");
        if mdd.is_empty() {
            m.warnings.push("no sentence satisfies the rules".into());
        }
        self.write_manifest(&mut m, started)?;
        Ok(m)
    }

    pub fn load_solutions(&self) -> Result<(String, Mdd)> {
        let hash = self.verified_input("compile", SOLUTIONS_FILE)?;
        Ok((hash, Mdd::load(&self.artifact(SOLUTIONS_FILE))?))
    }

    /// Solution MDD to sentence file, each sentence re-checked by the
    /// standalone validator.
    pub fn enumerate(&self) -> Result<StageManifest> {
        let started = Instant::now();
        let (input, mdd) = self.load_solutions()?;
        let fonts = self.fonts()?;
        let sentences = sentences_of(&mdd, self.cfg.limit);
        let mut bytes = Vec::new();
        for words in &sentences {
            let verdict = check_sentence(words, &self.cfg.rules, &fonts);
            if !verdict.passes() {
                return Err(Error::Invariant(format!("enumerated sentence fails the rules: {}", sentence_text(words))));
            }
            writeln!(bytes, "{}", sentence_text(words))?;
        }
        let path = self.artifact(SENTENCES_FILE);
        fs::write(&path, &bytes).map_err(Error::file(&path))?;

        let mut m = self.manifest("enumerate", None, started);
        m.inputs.insert(SOLUTIONS_FILE.into(), input);
        m.outputs.insert(SENTENCES_FILE.into(), sha256_bytes(&bytes));
        m.stats = serde_json::json!({
            "sentences": sentences.len(),
            "solutions": mdd.count_paths().to_string(),
            "limit": self.cfg.limit,
        });
        self.write_manifest(&mut m, started)?;
        Ok(m)
    }

    fn scorer(&self) -> Result<Box<dyn Scorer>> {
        let s = &self.cfg.scoring;
        Ok(match s.scorer {
            ScorerKind::Markov => {
                let extraction = extract_corpus(&self.sources()?, &self.lexicon()?, &self.cfg.rules, self.cfg.n);
                Box::new(train_markov(&extraction.sentences, s.order, s.alpha)?)
            }
            ScorerKind::Http => {
                let endpoint = s
                    .endpoint
                    .as_deref()
                    .ok_or_else(|| Error::Config("scoring.endpoint is required for the http scorer".into()))?;
                Box::new(HttpScorer::new(endpoint))
            }
            ScorerKind::Subprocess => {
                let (program, args) = s
                    .command
                    .split_first()
                    .ok_or_else(|| Error::Config("scoring.command is required for the subprocess scorer".into()))?;
                Box::new(SubprocessScorer::new(program.clone(), args.iter().cloned()))
            }
        })
    }

    /// Sentence file (by default the enumerate output) to ranked scores.
    pub fn score(&self, input: Option<&Path>) -> Result<(StageManifest, Vec<ScoreRecord>)> {
        let started = Instant::now();
        self.ensure_out_dir()?;
        let (path, hash) = match input {
            Some(p) => (p.to_path_buf(), sha256_file(p)?),
            None => (self.artifact(SENTENCES_FILE), self.verified_input("enumerate", SENTENCES_FILE)?),
        };
        let text = fs::read_to_string(&path).map_err(Error::file(&path))?;
        let mut sentences = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let tokens = tokenize(&RawSentence::new(line), &self.cfg.rules)
                .map_err(|e| Error::format(path.display().to_string(), i + 1, e.to_string()))?;
            sentences.push(tokens.into_iter().map(|t| t.surface).collect::<Vec<_>>());
        }
        if let Some(limit) = self.cfg.limit {
            sentences.truncate(limit);
        }
        let records: Vec<ScoreRecord> = if sentences.is_empty() {
            Vec::new()
        } else {
            let scorer = self.scorer()?;
            score_and_rank(&sentences, scorer.as_ref(), self.cfg.scoring.batch_size)?
                .into_iter()
                .map(|scored| ScoreRecord {
                    band: self.cfg.scoring.bands.band(scored.ppl),
                    scored,
                })
                .collect()
        };
        let mut bytes = Vec::new();
        for r in &records {
            serde_json::to_writer(&mut bytes, r).expect("record encodes");
            bytes.push(b'\n');
        }
        let out = self.artifact(SCORES_FILE);
        fs::write(&out, &bytes).map_err(Error::file(&out))?;

        let mut m = self.manifest("score", None, started);
        m.inputs.insert(path.display().to_string(), hash);
        m.outputs.insert(SCORES_FILE.into(), sha256_bytes(&bytes));
        m.stats = serde_json::json!({
            "sentences": records.len(),
            "scorer_id": records.first().map(|r| r.scored.scorer_id.clone()),
            "best_ppl": records.first().map(|r| r.scored.ppl),
        });
        self.write_manifest(&mut m, started)?;
        Ok((m, records))
    }

    /// Checks every non-empty line of `file` against the rules.
    pub fn validate(&self, file: &Path) -> Result<Vec<ValidationRecord>> {
        let fonts = self.fonts()?;
        let text = fs::read_to_string(file).map_err(Error::file(file))?;
        Ok(text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, line)| match tokenize(&RawSentence::new(line), &self.cfg.rules) {
                Ok(tokens) => {
                    let words: Vec<&str> = tokens.iter().map(|t| t.as_str()).collect();
                    let verdict = check_sentence(&words, &self.cfg.rules, &fonts);
                    ValidationRecord {
                        line: i + 1,
                        text: line.trim().to_owned(),
                        pass: verdict.passes(),
                        error: verdict.unknown_glyph.map(|c| format!("no width for {c:?}")),
                        verdict: Some(verdict),
                    }
                }
                Err(e) => ValidationRecord {
                    line: i + 1,
                    text: line.trim().to_owned(),
                    pass: false,
                    error: Some(e.to_string()),
                    verdict: None,
                },
            })
            .collect())
    }

    /// Manifests of every stage run so far.
    pub fn stats(&self) -> Result<Vec<StageManifest>> {
        Ok(["extract", "build-trie", "compile", "enumerate", "score"]
            .into_iter()
            .filter_map(|s| self.read_manifest(s).ok())
            .collect())
    }

    /// Up to `k` solutions drawn uniformly with the configured seed.
    pub fn sample(&self, k: usize) -> Result<Vec<String>> {
        let (_, mdd) = self.load_solutions()?;
        let count = mdd.count_paths();
        if count == BigUint::default() {
            return Ok(Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let bytes = count.to_bytes_le().len() + 8;
        Ok((0..k)
            .filter_map(|_| {
                let mut buf = vec![0u8; bytes];
                rng.fill_bytes(&mut buf);
                let index = BigUint::from_bytes_le(&buf) % &count;
                mdd.nth_path(&index).map(|p| sentence_text(&words_of(&mdd, &p)))
            })
            .collect())
    }

    /// Extract, build, compile and enumerate in memory without writing
    /// artifacts.
    pub fn generate(&self) -> Result<Vec<Vec<String>>> {
        let extraction = extract_corpus(&self.sources()?, &self.lexicon()?, &self.cfg.rules, self.cfg.n);
        let trie = MddTrie::build(self.cfg.n, &extraction.ngrams)?;
        let fonts = self.fonts()?;
        let mdd = match self.cfg.compile_method {
            CompileMethod::Unfold => unfold_traced(&trie, &self.cfg.rules, &fonts)?.0,
            CompileMethod::Intersection => compile_via_intersection(&trie, &self.cfg.rules, &fonts)?,
        };
        Ok(sentences_of(&mdd, self.cfg.limit))
    }
}

/// Words of a solution path, ε removed.
pub fn words_of(mdd: &Mdd, path: &[LabelId]) -> Vec<String> {
    path.iter()
        .filter_map(|&id| mdd.label(id).as_word().map(str::to_owned))
        .collect()
}

/// Solutions in enumeration order as word lists.
pub fn sentences_of(mdd: &Mdd, limit: Option<usize>) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    mdd.enumerate(limit, |p| out.push(words_of(mdd, p)));
    out
}

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(sha256_bytes(&fs::read(path).map_err(Error::file(path))?))
}
