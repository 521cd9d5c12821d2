//! Trains the built-in Markov model on the fixture corpus and ranks the
//! generated sentences by perplexity.

use std::path::Path;

use mnread_mdd::corpus::extract_corpus;
use mnread_mdd::pipeline::Pipeline;
use mnread_mdd::scoring::{score_and_rank, train_markov, PplBands};

fn main() -> mnread_mdd::Result<()> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture/en/mnread.toml");
    let p = Pipeline::load(&config)?;
    let extraction = extract_corpus(&p.sources()?, &p.lexicon()?, &p.cfg.rules, p.cfg.n);
    let bands = PplBands::default();

    for order in [1, 2, 3] {
        let model = train_markov(&extraction.sentences, order, 0.1)?;
        let ranked = score_and_rank(&p.generate()?, &model, 64)?;
        println!("== {} ({} sentences)", ranked[0].scorer_id, ranked.len());
        for r in ranked.iter().take(3).chain(ranked.last()) {
            println!("{:>3}  {:>7.3}  {:<4}  {}", r.rank, r.ppl, bands.band(r.ppl), r.text);
        }
    }
    Ok(())
}
