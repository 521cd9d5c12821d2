//! Runs the staged pipeline into a temporary directory, showing the
//! manifest each stage leaves behind and how a changed input is caught.

use std::fs;
use std::path::Path;

use mnread_mdd::pipeline::{Pipeline, PipelineConfig};

fn main() -> mnread_mdd::Result<()> {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixture/fr/mnread.toml");
    let mut cfg = PipelineConfig::load(&config)?;
    cfg.out_dir = std::env::temp_dir().join(format!("mnread-stages-{}", std::process::id()));
    let p = Pipeline::new(cfg);

    for m in [p.extract()?, p.build_trie()?, p.compile()?, p.enumerate()?] {
        println!("{:<10} {:>4} ms  outputs {:?}", m.stage, m.elapsed_ms, m.outputs.keys().collect::<Vec<_>>());
    }
    let (_, ranked) = p.score(None)?;
    for r in &ranked {
        println!("{:>2} {:>6.2} {}", r.scored.rank, r.scored.ppl, r.scored.text);
    }
    println!("samples: {:?}", p.sample(2)?);

    fs::write(p.artifact("solutions.mdd"), b"garbage")?;
    match p.enumerate() {
        Err(e) => println!("after tampering: {e}"),
        Ok(_) => println!("tampering went unnoticed"),
    }
    fs::remove_dir_all(&p.cfg.out_dir)?;
    Ok(())
}
