//! Small version of the locality sweep: success rate of the Wasserstein cost
//! for k = 1..=3 at n = 3, written as CSV to a directory given on the command
//! line (default `out/example_sweep_k`).
use std::path::PathBuf;

use qwc::experiments::{run_sweep_k, ExperimentConfig, ExperimentKind};

fn main() -> qwc::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("out/example_sweep_k"), PathBuf::from);
    let mut cfg = ExperimentConfig::new(ExperimentKind::SweepK);
    cfg.n = Some(vec![3]);
    cfg.runs = Some(5);
    cfg.max_steps = Some(300);
    cfg.early_stop = Some(true);
    cfg.output = Some(out);
    for path in run_sweep_k(&cfg.resolve()?, 4)? {
        println!("{}", std::fs::read_to_string(&path)?);
    }
    Ok(())
}
