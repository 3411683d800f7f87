//! Mean step-one gradient norms against qubit count for all three costs.
use qwc::experiments::{barren_plateau_rows, ExperimentConfig, ExperimentKind};

fn main() -> qwc::Result<()> {
    let mut cfg = ExperimentConfig::new(ExperimentKind::BarrenPlateau);
    cfg.n = Some((3..=6).collect());
    cfg.runs = Some(20);
    let cfg = cfg.resolve()?;
    println!(
        "{:>2} {:>4} {:>10} {:>10}",
        "n", "cost", "mean_l1", "mean_l2"
    );
    for row in barren_plateau_rows(&cfg, 4)? {
        println!(
            "{:>2} {:>4} {:>10.4} {:>10.4}",
            row.n, row.cost_kind, row.mean_l1, row.mean_l2
        );
    }
    Ok(())
}
