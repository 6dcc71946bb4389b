//! Run a bundled scenario from code and list what it wrote.

use matwalk::harness::{bundled, run_scenario, RunOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = bundled("azuma_coinflip").ok_or("missing scenario")?;
    let opts = RunOptions { out_dir: Some(std::env::temp_dir().join("matwalk-example")), ..RunOptions::from_env() };
    let outcome = run_scenario(&config, &opts)?;
    println!("seed {}", outcome.seed);
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    print!("{}", std::fs::read_to_string(outcome.dir.join("summary.txt"))?);
    Ok(())
}
