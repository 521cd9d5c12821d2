//! Command-line front end for the generation pipeline.

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mnread_mdd::pipeline::{Pipeline, PipelineConfig, ScoreRecord, ScorerKind, StageManifest, ValidationRecord};
use mnread_mdd::{Error, Result};

#[derive(Parser)]
#[command(name = "mnread", version, about = "Generate standardized reading-test sentences")]
struct Cli {
    /// Pipeline configuration file.
    #[arg(long, global = true, default_value = "mnread.toml")]
    config: PathBuf,
    /// Worker threads (0 = one per core); overrides the config.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Cap on enumerated and scored sentences; overrides the config.
    #[arg(long, global = true)]
    limit: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Segment, filter and cut the corpus into position-typed n-grams.
    Extract,
    /// Build the initial, middle and final tries from the n-grams.
    BuildTrie,
    /// Compile the solution diagram from the tries.
    Compile,
    /// Write every solution (up to --limit) as a sentence.
    Enumerate,
    /// Rank sentences by perplexity.
    Score {
        /// Sentence file; defaults to the enumerate output.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Score against this HTTP service instead of the configured scorer.
        #[arg(long)]
        endpoint: Option<String>,
    },
    /// Check each line of a file against the sentence rules.
    Validate { file: PathBuf },
    /// Show stage manifests and a few sampled solutions.
    Stats {
        #[arg(long, default_value_t = 5)]
        sample: usize,
    },
    /// Run every stage from extract to score.
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mnread: {e}");
            match e {
                Error::Invariant(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = PipelineConfig::load(&cli.config)?;
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    if cli.limit.is_some() {
        cfg.limit = cli.limit;
    }
    if let Command::Score { endpoint: Some(url), .. } = &cli.command {
        cfg.scoring.scorer = ScorerKind::Http;
        cfg.scoring.endpoint = Some(url.clone());
    }
    if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let p = Pipeline::new(cfg);
    let out = Out(cli.format);
    match cli.command {
        Command::Extract => out.manifest(&p.extract()?),
        Command::BuildTrie => out.manifest(&p.build_trie()?),
        Command::Compile => out.manifest(&p.compile()?),
        Command::Enumerate => out.manifest(&p.enumerate()?),
        Command::Score { input, .. } => {
            let (m, records) = p.score(input.as_deref())?;
            out.scores(&m, &records);
        }
        Command::Validate { file } => {
            let records = p.validate(&file)?;
            out.validation(&records);
            if records.iter().any(|r| !r.pass) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Stats { sample } => {
            for m in p.stats()? {
                out.manifest(&m);
            }
            let samples = p.sample(sample).unwrap_or_default();
            out.samples(&samples);
        }
        Command::Run => {
            out.manifest(&p.extract()?);
            out.manifest(&p.build_trie()?);
            out.manifest(&p.compile()?);
            out.manifest(&p.enumerate()?);
            let (m, records) = p.score(None)?;
            out.scores(&m, &records);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Prints a line, exiting quietly once stdout is closed.
macro_rules! emit {
    ($($t:tt)*) => { write_line(format_args!($($t)*)) };
}

fn write_line(args: fmt::Arguments<'_>) {
    let mut out = io::stdout().lock();
    if out.write_fmt(args).and_then(|_| out.write_all(b"\n")).is_err() {
        std::process::exit(0);
    }
}

struct Out(Format);

impl Out {
    fn line<T: Serialize>(&self, v: &T) {
        emit!("{}", serde_json::to_string(v).expect("output encodes"));
    }

    fn manifest(&self, m: &StageManifest) {
        if self.0 == Format::Jsonl {
            return self.line(m);
        }
        emit!("== {} ({} ms)", m.stage, m.elapsed_ms);
        if let serde_json::Value::Object(fields) = &m.stats {
            for (k, v) in fields {
                emit!("  {k}: {v}");
            }
        }
        for (name, hash) in &m.outputs {
            emit!("  wrote {name} sha256:{}", &hash[..16]);
        }
        for w in &m.warnings {
            emit!("  warning: {w}");
        }
    }

    fn scores(&self, m: &StageManifest, records: &[ScoreRecord]) {
        if self.0 == Format::Jsonl {
            records.iter().for_each(|r| self.line(r));
            return;
        }
        self.manifest(m);
        emit!("{:>5}  {:>9}  {:<4}  text", "rank", "ppl", "band");
        for r in records {
            emit!("{:>5}  {:>9.3}  {:<4}  {}", r.scored.rank, r.scored.ppl, r.band, r.scored.text);
        }
    }

    fn validation(&self, records: &[ValidationRecord]) {
        for r in records {
            if self.0 == Format::Jsonl {
                self.line(r);
                continue;
            }
            let mut why = Vec::new();
            if let Some(e) = &r.error {
                why.push(e.clone());
            }
            if let Some(v) = &r.verdict {
                if !v.word_count_ok {
                    why.push(format!("{} words", v.word_count));
                }
                if !v.char_budget_ok {
                    why.push(format!("{} characters", v.char_count));
                }
                if !v.display_ok {
                    why.push("no justified layout".into());
                }
            }
            let status = if r.pass { "PASS" } else { "FAIL" };
            if why.is_empty() {
                emit!("{status} {}: {}", r.line, r.text);
            } else {
                emit!("{status} {}: {} ({})", r.line, r.text, why.join(", "));
            }
        }
    }

    fn samples(&self, samples: &[String]) {
        for s in samples {
            if self.0 == Format::Jsonl {
                self.line(&serde_json::json!({ "sample": s }));
            } else {
                emit!("sample: {s}");
            }
        }
    }
}
