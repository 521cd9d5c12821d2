//! Builds a trie from synthetic 5-grams and compiles it with the standard
//! rules, reporting sizes, time and peak memory.
//!
//!     cargo run --release --example scale_run -- [ngrams] [seed]

use std::path::Path;
use std::time::Instant;

use mnread_mdd::compile::{peak_rss_bytes, reset_peak_rss, unfold};
use mnread_mdd::corpus::{synthetic_ngrams, SyntheticShape};
use mnread_mdd::rules::{FontMetrics, RuleConfig};
use mnread_mdd::trie::MddTrie;

fn gib(bytes: Option<u64>) -> String {
    bytes.map_or("n/a".into(), |b| format!("{:.2} GiB", b as f64 / (1u64 << 30) as f64))
}

fn main() -> mnread_mdd::Result<()> {
    let mut args = std::env::args().skip(1);
    let target = args.next().and_then(|a| a.parse().ok()).unwrap_or(700_000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let shape = SyntheticShape { target, seed, ..SyntheticShape::default() };

    let t = Instant::now();
    let grams = synthetic_ngrams(&shape);
    println!("generated {} 5-grams in {:?}", grams.len(), t.elapsed());

    reset_peak_rss();
    let t = Instant::now();
    let trie = MddTrie::build(5, &grams)?;
    println!("trie: {} labels, {} paths, built in {:?}, peak {}", trie.labels().len(), trie.ngram_count(), t.elapsed(), gib(peak_rss_bytes()));
    drop(grams);

    let fonts = FontMetrics::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture/times.tsv"))?;
    let cfg = RuleConfig { box_width: 7681, ..RuleConfig::default() };
    reset_peak_rss();
    let t = Instant::now();
    let mdd = unfold(&trie, &cfg, &fonts)?;
    println!(
        "compile: {} nodes, {} arcs, {} solutions in {:?}, peak {}",
        mdd.node_count(),
        mdd.arc_count(),
        mdd.count_paths(),
        t.elapsed(),
        gib(peak_rss_bytes())
    );
    Ok(())
}
