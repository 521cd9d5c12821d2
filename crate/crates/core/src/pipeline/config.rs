use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rules::RuleConfig;
use crate::scoring::PplBands;

/// How `compile` builds the solution diagram.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompileMethod {
    #[default]
    Unfold,
    Intersection,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    #[default]
    Markov,
    Http,
    Subprocess,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoringConfig {
    pub scorer: ScorerKind,
    /// Base URL of the scoring service, for `http`.
    pub endpoint: Option<String>,
    /// Program and arguments, for `subprocess`.
    pub command: Vec<String>,
    /// Markov context length.
    pub order: usize,
    /// Markov additive smoothing.
    pub alpha: f64,
    pub batch_size: usize,
    pub bands: PplBands,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            scorer: ScorerKind::Markov,
            endpoint: None,
            command: Vec::new(),
            order: 2,
            alpha: 0.1,
            batch_size: 64,
            bands: PplBands::default(),
        }
    }
}

/// Everything a pipeline run depends on. Relative paths are resolved
/// against the directory of the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// N-gram order.
    pub n: usize,
    /// Directory of `.txt` sources, one book per file.
    pub corpus_dir: PathBuf,
    /// Lemma list; without it every word is accepted.
    pub lemmas: Option<PathBuf>,
    /// `surface<TAB>lemma` file.
    pub inflections: Option<PathBuf>,
    /// Character width table; needed from `compile` on.
    pub font: Option<PathBuf>,
    /// Where stage artifacts are written.
    pub out_dir: PathBuf,
    /// Worker threads, 0 for one per core.
    pub jobs: usize,
    /// Cap on enumerated and scored sentences.
    pub limit: Option<usize>,
    /// Seed for sampled sentences in `stats`.
    pub seed: u64,
    pub compile_method: CompileMethod,
    pub rules: RuleConfig,
    pub scoring: ScoringConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            n: 5,
            corpus_dir: PathBuf::from("corpus"),
            lemmas: None,
            inflections: None,
            font: None,
            out_dir: PathBuf::from("out"),
            jobs: 0,
            limit: None,
            seed: 0,
            compile_method: CompileMethod::Unfold,
            rules: RuleConfig::default(),
            scoring: ScoringConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path).map_err(Error::file(path))?;
        let mut cfg: PipelineConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        cfg.check()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str, base: &Path) -> Result<PipelineConfig> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.resolve_paths(base);
        cfg.check()?;
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus_dir);
        fix(&mut self.out_dir);
        for p in [&mut self.lemmas, &mut self.inflections, &mut self.font].into_iter().flatten() {
            fix(p);
        }
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config("n must be at least 2".into()));
        }
        if self.inflections.is_some() && self.lemmas.is_none() {
            return Err(Error::Config("inflections given without lemmas".into()));
        }
        Ok(())
    }

    /// Hex SHA-256 of the settings that shape the generated sentences
    /// (paths and scoring excluded).
    pub fn config_hash(&self) -> String {
        let relevant = serde_json::json!({
            "n": self.n,
            "rules": self.rules,
            "compile_method": self.compile_method,
        });
        hex::encode(Sha256::digest(relevant.to_string().as_bytes()))
    }
}
