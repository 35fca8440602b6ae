//! Runs a pipeline through the library with a small config and writes its CSV tables
//! and JSON report to a scratch directory.

use henon_renorm::experiments::{exp_walk_vs_words, Context, ExperimentConfig};

fn main() -> anyhow::Result<()> {
    let cfg = ExperimentConfig { n: 16, ..ExperimentConfig::default() };
    cfg.validate()?;
    println!("config hash {}", cfg.hash());
    let rep = exp_walk_vs_words(&cfg, &Context::new())?;
    for (k, v) in &rep.summary {
        println!("{k} = {v}");
    }
    for c in &rep.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let dir = std::env::temp_dir().join("henon-renorm-example");
    for p in rep.write(&dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
