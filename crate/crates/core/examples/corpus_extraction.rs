//! Segments, filters and cuts the English fixture books into 3-grams and
//! prints what each filter removed.
//!
//!     cargo run --example corpus_extraction -- [corpus dir] [lemmas] [inflections]

use std::path::{Path, PathBuf};

use mnread_mdd::corpus::{build_lexicon, extract_corpus, filter_sentence, segment_sentences, FilterReason, SourceText};
use mnread_mdd::rules::RuleConfig;

fn main() -> mnread_mdd::Result<()> {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture/en");
    let mut args = std::env::args().skip(1).map(PathBuf::from);
    let corpus = args.next().unwrap_or(fixture.join("corpus"));
    let lemmas = args.next().unwrap_or(fixture.join("lemmas.txt"));
    let inflections = args.next().or(Some(fixture.join("inflections.txt")));

    let lexicon = build_lexicon(&lemmas, inflections.as_deref())?;
    let sources = SourceText::read_dir(&corpus)?;
    let rules = RuleConfig::default();

    for source in &sources {
        for s in segment_sentences(&source.text, &source.source_id) {
            let verdict = filter_sentence(&s, &lexicon, &rules);
            if verdict.reason != FilterReason::Ok {
                println!("rejected ({}): {}", verdict.reason.as_str(), s.text);
            }
        }
    }

    let extraction = extract_corpus(&sources, &lexicon, &rules, 3);
    let r = &extraction.report;
    println!("{} sources, {} sentences, {} accepted", r.sources, r.sentences, r.accepted);
    for (position, count) in &r.ngrams {
        println!("  {position:?}: {count} distinct 3-grams");
    }
    for g in extraction.ngrams.iter().take(5) {
        println!("  {g}");
    }
    Ok(())
}
