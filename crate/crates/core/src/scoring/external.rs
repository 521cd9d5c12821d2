//! Clients for an external perplexity scorer.
//!
//! HTTP: `POST /score` with `{"texts": [...]}`, answered by
//! `{"ppl": [...], "model": "..."}` in the same order.
//!
//! Subprocess: one `{"id": i, "text": "..."}` line per sentence on stdin,
//! one `{"id": i, "ppl": x}` line per sentence on stdout, any order.

use std::io::Write;
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{sentence_text, Scorer};
use crate::error::{Error, Result};

#[derive(Serialize)]
struct ScoreRequest<'a> {
    texts: &'a [String],
}

#[derive(Deserialize)]
struct ScoreResponse {
    ppl: Vec<f64>,
    #[serde(default)]
    model: String,
}

/// HTTP client with retries and exponential backoff on transient failures
/// (connection errors, 429 and 5xx responses).
#[derive(Debug)]
pub struct HttpScorer {
    url: String,
    agent: ureq::Agent,
    retries: u32,
    backoff: Duration,
    model: Mutex<Option<String>>,
}

impl HttpScorer {
    /// `endpoint` is the service base URL; `/score` is appended unless
    /// already present.
    pub fn new(endpoint: &str) -> Self {
        let base = endpoint.trim_end_matches('/');
        let url = if base.ends_with("/score") {
            base.to_owned()
        } else {
            format!("{base}/score")
        };
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(120)))
            .http_status_as_error(false)
            .build()
            .into();
        HttpScorer {
            url,
            agent,
            retries: 3,
            backoff: Duration::from_millis(200),
            model: Mutex::new(None),
        }
    }

    pub fn with_retries(mut self, retries: u32, backoff: Duration) -> Self {
        self.retries = retries;
        self.backoff = backoff;
        self
    }

    /// The model name reported by the last successful response.
    pub fn model(&self) -> Option<String> {
        self.model.lock().expect("model lock").clone()
    }

    pub fn score_texts(&self, texts: &[String]) -> Result<Vec<f64>> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let mut attempt = 0;
        loop {
            match self.post(texts) {
                Ok(resp) => {
                    if resp.ppl.len() != texts.len() {
                        return Err(Error::Protocol(format!("{} scores for {} texts", resp.ppl.len(), texts.len())));
                    }
                    if let Some(i) = resp.ppl.iter().position(|p| !p.is_finite() || *p <= 0.0) {
                        return Err(Error::Scoring {
                            index: Some(i),
                            message: format!("scorer returned {}", resp.ppl[i]),
                        });
                    }
                    *self.model.lock().expect("model lock") = Some(resp.model);
                    return Ok(resp.ppl);
                }
                Err(Retry::Transient(msg)) => {
                    if attempt >= self.retries {
                        return Err(Error::Transport(format!("{}: {msg} (after {} attempts)", self.url, attempt + 1)));
                    }
                    thread::sleep(self.backoff * 2u32.pow(attempt));
                    attempt += 1;
                }
                Err(Retry::Fatal(e)) => return Err(e),
            }
        }
    }

    fn post(&self, texts: &[String]) -> std::result::Result<ScoreResponse, Retry> {
        let mut resp = self
            .agent
            .post(&self.url)
            .send_json(ScoreRequest { texts })
            .map_err(|e| Retry::Transient(e.to_string()))?;
        let status = resp.status().as_u16();
        if status == 429 || status >= 500 {
            return Err(Retry::Transient(format!("HTTP {status}")));
        }
        if status != 200 {
            return Err(Retry::Fatal(Error::Protocol(format!("{}: HTTP {status}", self.url))));
        }
        resp.body_mut()
            .read_json::<ScoreResponse>()
            .map_err(|e| Retry::Fatal(Error::Protocol(format!("malformed response: {e}"))))
    }
}

enum Retry {
    Transient(String),
    Fatal(Error),
}

impl Scorer for HttpScorer {
    fn scorer_id(&self) -> String {
        match self.model() {
            Some(m) if !m.is_empty() => format!("http:{m}"),
            _ => format!("http:{}", self.url),
        }
    }

    fn score_batch(&self, sentences: &[Vec<String>]) -> Result<Vec<f64>> {
        let texts: Vec<String> = sentences.iter().map(|s| sentence_text(s)).collect();
        self.score_texts(&texts)
    }
}

/// Scores `texts` against the service at `endpoint`.
pub fn external_score(endpoint: &str, texts: &[String]) -> Result<Vec<f64>> {
    HttpScorer::new(endpoint).score_texts(texts)
}

/// Runs a scorer program once per batch, speaking newline-delimited JSON.
#[derive(Clone, Debug)]
pub struct SubprocessScorer {
    program: String,
    args: Vec<String>,
}

#[derive(Serialize)]
struct LineRequest<'a> {
    id: usize,
    text: &'a str,
}

#[derive(Deserialize)]
struct LineResponse {
    id: usize,
    ppl: f64,
}

impl SubprocessScorer {
    pub fn new(program: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Self {
        SubprocessScorer {
            program: program.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn score_texts(&self, texts: &[String]) -> Result<Vec<f64>> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| Error::Transport(format!("cannot start {}: {e}", self.program)))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let mut input = Vec::new();
        for (id, text) in texts.iter().enumerate() {
            serde_json::to_writer(&mut input, &LineRequest { id, text }).expect("request encodes");
            input.push(b'\n');
        }
        let writer = thread::spawn(move || stdin.write_all(&input));
        let output = child
            .wait_with_output()
            .map_err(|e| Error::Transport(format!("{}: {e}", self.program)))?;
        let written = writer.join().expect("writer thread");
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(Error::Transport(format!("{} exited with {}: {}", self.program, output.status, stderr.trim())));
        }
        written.map_err(|e| Error::Transport(format!("writing to {}: {e}", self.program)))?;

        let mut ppl = vec![None; texts.len()];
        let stdout = String::from_utf8_lossy(&output.stdout);
        for line in stdout.lines().filter(|l| !l.trim().is_empty()) {
            let reply: LineResponse =
                serde_json::from_str(line).map_err(|e| Error::Protocol(format!("malformed line {line:?}: {e}")))?;
            let slot = ppl
                .get_mut(reply.id)
                .ok_or_else(|| Error::Protocol(format!("unknown id {}", reply.id)))?;
            if slot.replace(reply.ppl).is_some() {
                return Err(Error::Protocol(format!("duplicate id {}", reply.id)));
            }
        }
        ppl.into_iter()
            .enumerate()
            .map(|(i, p)| match p {
                None => Err(Error::Protocol(format!("no score for id {i}"))),
                Some(p) if !p.is_finite() || p <= 0.0 => Err(Error::Scoring {
                    index: Some(i),
                    message: format!("scorer returned {p}"),
                }),
                Some(p) => Ok(p),
            })
            .collect()
    }
}

impl Scorer for SubprocessScorer {
    fn scorer_id(&self) -> String {
        format!("subprocess:{}", self.program)
    }

    fn score_batch(&self, sentences: &[Vec<String>]) -> Result<Vec<f64>> {
        let texts: Vec<String> = sentences.iter().map(|s| sentence_text(s)).collect();
        self.score_texts(&texts)
    }
}
