//! Checks hand-written sentences against the word-count, character-budget
//! and display rules, without any MDD.
//!
//!     cargo run --example validate_sentences -- ["sentence" ...]

use std::path::Path;

use mnread_mdd::corpus::{tokenize, RawSentence};
use mnread_mdd::rules::{check_sentence, FontMetrics, RuleConfig};

fn main() -> mnread_mdd::Result<()> {
    let fonts = FontMetrics::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture/times.tsv"))?;
    let rules = RuleConfig {
        box_width: 7681,
        ..RuleConfig::default()
    };
    let mut inputs: Vec<String> = std::env::args().skip(1).collect();
    if inputs.is_empty() {
        inputs = [
            "He saw a big black dog sleeping on the old barn on the hill.",
            "He saw a big black dog sleeping on the old barn on a hill.",
            "The dog ran to the old barn near the river.",
            "My sister and my brother walked to the old red barn on the hill.",
        ]
        .map(String::from)
        .to_vec();
    }
    for text in &inputs {
        let words: Vec<String> = tokenize(&RawSentence::new(text.as_str()), &rules)?
            .into_iter()
            .map(|t| t.surface)
            .collect();
        let v = check_sentence(&words, &rules, &fonts);
        println!("{} {text}", if v.passes() { "PASS" } else { "FAIL" });
        println!(
            "     {} words ({}), {} characters ({}), layout {}",
            v.word_count,
            ok(v.word_count_ok),
            v.char_count,
            ok(v.char_budget_ok),
            v.line_breaks.map_or("none".into(), |b| format!("breaks before words {b:?}"))
        );
    }
    Ok(())
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "out of range"
    }
}
