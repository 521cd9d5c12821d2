//! A minimal in-process HTTP server speaking the scoring protocol, for
//! tests and offline demos. It serves `POST /score` and `GET /health`.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};

use serde_json::json;

type ScoreFn = dyn Fn(&str) -> f64 + Send + Sync;

pub struct StubServer {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    requests: Arc<AtomicUsize>,
    handle: Option<JoinHandle<()>>,
}

pub struct StubBuilder {
    model: String,
    fail_first: usize,
    drop_last: bool,
}

impl StubBuilder {
    /// Answer the first `n` score requests with HTTP 503.
    pub fn fail_first(mut self, n: usize) -> Self {
        self.fail_first = n;
        self
    }

    /// Return one score fewer than requested.
    pub fn drop_last(mut self) -> Self {
        self.drop_last = true;
        self
    }

    pub fn start<F>(self, score: F) -> io::Result<StubServer>
    where
        F: Fn(&str) -> f64 + Send + Sync + 'static,
    {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let requests = Arc::new(AtomicUsize::new(0));
        let score: Arc<ScoreFn> = Arc::new(score);
        let handle = {
            let stop = stop.clone();
            let requests = requests.clone();
            thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let seen = requests.fetch_add(1, Ordering::SeqCst);
                    let fail = seen < self.fail_first;
                    let _ = serve(stream, &self.model, &*score, fail, self.drop_last);
                }
            })
        };
        Ok(StubServer {
            addr,
            stop,
            requests,
            handle: Some(handle),
        })
    }
}

impl StubServer {
    pub fn builder(model: &str) -> StubBuilder {
        StubBuilder {
            model: model.to_owned(),
            fail_first: 0,
            drop_last: false,
        }
    }

    /// Serves `score(text)` for every text under the model name `model`.
    pub fn start<F>(model: &str, score: F) -> io::Result<StubServer>
    where
        F: Fn(&str) -> f64 + Send + Sync + 'static,
    {
        StubServer::builder(model).start(score)
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Connections handled so far.
    pub fn requests(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn serve(stream: TcpStream, model: &str, score: &ScoreFn, fail: bool, drop_last: bool) -> io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut length = 0usize;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header)? == 0 || header.trim().is_empty() {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            if name.trim().eq_ignore_ascii_case("content-length") {
                length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0; length];
    reader.read_exact(&mut body)?;

    let mut parts = request_line.split_whitespace();
    let (status, payload) = match (parts.next(), parts.next()) {
        (Some("GET"), Some("/health")) => (200, json!({"model": model, "ready": true})),
        (Some("POST"), Some("/score")) if fail => (503, json!({"error": "unavailable"})),
        (Some("POST"), Some("/score")) => match serde_json::from_slice::<serde_json::Value>(&body) {
            Ok(v) => match v.get("texts").and_then(|t| t.as_array()) {
                Some(texts) => {
                    let mut ppl: Vec<f64> = texts.iter().map(|t| score(t.as_str().unwrap_or(""))).collect();
                    if drop_last {
                        ppl.pop();
                    }
                    (200, json!({"ppl": ppl, "model": model}))
                }
                None => (400, json!({"error": "missing texts"})),
            },
            Err(_) => (400, json!({"error": "invalid json"})),
        },
        _ => (404, json!({"error": "not found"})),
    };
    let body = payload.to_string();
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 {status} {}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        if status == 200 { "OK" } else { "Error" },
        body.len()
    )?;
    stream.flush()
}
