//! Generates every MNREAD-style sentence of the English fixture by
//! unfolding its 3-gram tries, then checks each with the standalone
//! validator.

use std::path::Path;
use std::time::Instant;

use mnread_mdd::compile::{stats, unfold_traced};
use mnread_mdd::pipeline::{sentences_of, Pipeline};
use mnread_mdd::rules::check_sentence;
use mnread_mdd::scoring::sentence_text;

fn main() -> mnread_mdd::Result<()> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture/en/mnread.toml");
    let p = Pipeline::load(&config)?;
    let fonts = p.fonts()?;
    let extraction = mnread_mdd::corpus::extract_corpus(&p.sources()?, &p.lexicon()?, &p.cfg.rules, p.cfg.n);
    let trie = mnread_mdd::trie::MddTrie::build(p.cfg.n, &extraction.ngrams)?;

    let t = Instant::now();
    let (mdd, frontier) = unfold_traced(&trie, &p.cfg.rules, &fonts)?;
    let s = stats(&mdd, t.elapsed());
    println!("{} nodes, {} arcs, {} sentences in {} ms", s.nodes, s.arcs, s.solutions, s.elapsed_ms);
    println!("states explored per level: {frontier:?}");

    for words in sentences_of(&mdd, Some(10)) {
        let v = check_sentence(&words, &p.cfg.rules, &fonts);
        let breaks = v.line_breaks.clone().unwrap_or_default();
        let mut lines = Vec::new();
        let mut start = 0;
        for &b in breaks.iter().chain([words.len()].iter()) {
            lines.push(words[start..b].join(" "));
            start = b;
        }
        println!("{} [{}]", sentence_text(&words), lines.join(" | "));
        assert!(v.passes());
    }
    Ok(())
}
