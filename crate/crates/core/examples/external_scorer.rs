//! Scores sentences through the two external protocols: an HTTP service
//! (here an in-process stub) and a subprocess speaking NDJSON.

use std::time::Duration;

use mnread_mdd::scoring::stub::StubServer;
use mnread_mdd::scoring::{score_and_rank, HttpScorer, SubprocessScorer};

fn main() -> mnread_mdd::Result<()> {
    let sentences: Vec<Vec<String>> = [
        "My mother saw the little girl in the old man in the old man",
        "He saw a big black dog sleeping on the old barn on the hill",
        "He found a big red ball in the old man ran to the old table",
    ]
    .iter()
    .map(|s| s.split(' ').map(String::from).collect())
    .collect();

    // A fake model: perplexity grows with the number of distinct letters.
    let server = StubServer::builder("letters-v1").fail_first(1).start(|text| {
        let mut seen: Vec<char> = text.chars().filter(|c| c.is_alphabetic()).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len() as f64
    })?;
    let http = HttpScorer::new(&server.url()).with_retries(3, Duration::from_millis(50));
    for r in score_and_rank(&sentences, &http, 2)? {
        println!("{} {:>5.1} {} [{}]", r.rank, r.ppl, r.text, r.scorer_id);
    }
    println!("{} requests, first one refused and retried", server.requests());

    let script = r#"while read -r line; do id=${line#*\"id\":}; id=${id%%,*}; echo "{\"id\":$id,\"ppl\":$((id + 10))}"; done"#;
    let sub = SubprocessScorer::new("sh", ["-c", script]);
    for r in score_and_rank(&sentences, &sub, 8)? {
        println!("{} {:>5.1} {} [{}]", r.rank, r.ppl, r.text, r.scorer_id);
    }
    Ok(())
}
