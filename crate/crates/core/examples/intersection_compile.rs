//! Builds the solution set a second way, as the intersection of one MDD
//! per rule, and compares it with the unfolded one.

use std::path::Path;

use mnread_mdd::compile::{char_budget_mdd, compile_via_intersection, display_mdd, length_mdd, succession_mdd, unfold};
use mnread_mdd::corpus::extract_corpus;
use mnread_mdd::pipeline::Pipeline;
use mnread_mdd::trie::MddTrie;

fn main() -> mnread_mdd::Result<()> {
    let lang = std::env::args().nth(1).unwrap_or_else(|| "fr".into());
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture").join(lang).join("mnread.toml");
    let p = Pipeline::load(&config)?;
    let fonts = p.fonts()?;
    let rules = &p.cfg.rules;
    let extraction = extract_corpus(&p.sources()?, &p.lexicon()?, rules, p.cfg.n);
    let trie = MddTrie::build(p.cfg.n, &extraction.ngrams)?;

    for (name, m) in [
        ("succession", succession_mdd(&trie, rules, &fonts)?),
        ("word count", length_mdd(&trie, rules, &fonts)?),
        ("character budget", char_budget_mdd(&trie, rules, &fonts)?),
        ("display", display_mdd(&trie, rules, &fonts)?),
    ] {
        println!("{name:>16}: {:>6} nodes, {:>24} paths", m.node_count(), m.count_paths());
    }

    let a = compile_via_intersection(&trie, rules, &fonts)?;
    let b = unfold(&trie, rules, &fonts)?;
    println!("intersection: {} sentences, unfold: {} sentences", a.count_paths(), b.count_paths());
    println!("same sentences: {}", a.path_set() == b.path_set());
    Ok(())
}
