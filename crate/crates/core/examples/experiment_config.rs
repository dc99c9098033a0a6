//! Running an experiment from `key = value` text and writing its CSV and JSON.

use cftp_lab::experiment::{run_and_write, Experiment, RunConfig};

fn main() -> cftp_lab::Result<()> {
    let mut cfg = RunConfig::from_env(Experiment::Diagonal)?;
    cfg.apply_text(
        "# diagonal coalescence time, small run
         p = 0.3
         q = 2
         extents = 31x31
         replicas = 5000
         max_r = 5
         workers = 2",
    )?;
    let dir = std::env::temp_dir().join("cftp-lab-example");
    std::fs::create_dir_all(&dir)?;
    cfg.output = Some(dir.join("diagonal.csv"));
    let (out, envelope) = run_and_write(&cfg)?;
    print!("{}", out.csv);
    println!("summary: {}", envelope["summary"]);
    println!("written to {}", dir.display());
    Ok(())
}
