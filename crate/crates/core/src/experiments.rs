//! Experiment sweeps behind the `qwc` binary.
//!
//! Each experiment is described by an [`ExperimentConfig`] (usually read from
//! a JSON manifest) and writes tidy CSV plus a JSON summary into its output
//! directory. Runs are independent: run `r` of a cell draws its problem,
//! ensemble and training seeds from `(seed, r)` only, so results do not
//! depend on `--jobs` or scheduling order.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{
    derive_seed, make_problem_with_layout, EnsembleMode, EnsembleSpec, Entanglement, HeaLayout,
};
use crate::costs::{CompilationProblem, CostKind};
use crate::error::{QwcError, Result};
use crate::gradients::cost_gradient;
use crate::optimize::{compile, EarlyStop, StopReason, TrainingConfig, TrainingRecord};
use crate::pauli::Estimator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Compile,
    SweepK,
    SweepStates,
    BarrenPlateau,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Compile => "compile",
            ExperimentKind::SweepK => "sweep_k",
            ExperimentKind::SweepStates => "sweep_states",
            ExperimentKind::BarrenPlateau => "barren_plateau",
        }
    }
}

/// Experiment manifest. Unset fields take per-experiment defaults, see
/// [`ExperimentConfig::resolve`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub n: Option<Vec<usize>>,
    #[serde(default)]
    pub entanglement: Option<Entanglement>,
    #[serde(default)]
    pub layout: Option<HeaLayout>,
    /// Locality values; `None` means `ceil(n/2)` (or `1..=n` for `sweep_k`).
    #[serde(default)]
    pub k: Option<Vec<usize>>,
    #[serde(default)]
    pub ensemble_sizes: Option<Vec<usize>>,
    #[serde(default)]
    pub ensemble_mode: Option<EnsembleMode>,
    #[serde(default)]
    pub runs: Option<usize>,
    #[serde(default)]
    pub cost_kinds: Option<Vec<CostKind>>,
    #[serde(default)]
    pub max_steps: Option<usize>,
    #[serde(default)]
    pub early_stop: Option<bool>,
    #[serde(default)]
    pub shots: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// A manifest with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub experiment: ExperimentKind,
    pub n: Vec<usize>,
    pub entanglement: Entanglement,
    pub layout: HeaLayout,
    pub k: Option<Vec<usize>>,
    pub ensemble_sizes: Vec<usize>,
    pub ensemble_mode: EnsembleMode,
    pub runs: usize,
    pub cost_kinds: Vec<CostKind>,
    pub max_steps: usize,
    pub early_stop: bool,
    pub shots: Option<u64>,
    pub seed: u64,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            n: None,
            entanglement: None,
            layout: None,
            k: None,
            ensemble_sizes: None,
            ensemble_mode: None,
            runs: None,
            cost_kinds: None,
            max_steps: None,
            early_stop: None,
            shots: None,
            seed: None,
            output: None,
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fills defaults and validates ranges.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        use ExperimentKind::*;
        let kind = self.experiment;
        let n = self.n.clone().unwrap_or_else(|| match kind {
            Compile => vec![3, 4],
            SweepK => vec![4, 5, 6],
            SweepStates => (3..=8).collect(),
            BarrenPlateau => (3..=8).collect(),
        });
        let entanglement = self.entanglement.unwrap_or(match kind {
            Compile | SweepK => Entanglement::Full,
            SweepStates | BarrenPlateau => Entanglement::Linear,
        });
        let ensemble_sizes = self.ensemble_sizes.clone().unwrap_or_else(|| match kind {
            SweepStates => (2..=16).collect(),
            _ => vec![8],
        });
        let runs = self.runs.unwrap_or(match kind {
            Compile | SweepStates => 10,
            SweepK => 30,
            BarrenPlateau => 100,
        });
        let cost_kinds = self.cost_kinds.clone().unwrap_or_else(|| match kind {
            Compile | BarrenPlateau => CostKind::ALL.to_vec(),
            SweepK | SweepStates => vec![CostKind::Qwc],
        });
        let resolved = ResolvedConfig {
            experiment: kind,
            n,
            entanglement,
            layout: self.layout.unwrap_or_default(),
            k: self.k.clone(),
            ensemble_sizes,
            ensemble_mode: self.ensemble_mode.unwrap_or_default(),
            runs,
            cost_kinds,
            max_steps: self.max_steps.unwrap_or(1000),
            early_stop: self.early_stop.unwrap_or(false),
            shots: self.shots,
            seed: self.seed.unwrap_or(0),
            output: self
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("out/{}", kind.name()))),
        };
        resolved.validate()?;
        Ok(resolved)
    }
}

/// `ceil(n / 2)`.
pub fn default_k(n: usize) -> usize {
    n.div_ceil(2)
}

impl ResolvedConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(QwcError::Config(m));
        if self.n.is_empty() || self.ensemble_sizes.is_empty() || self.cost_kinds.is_empty() {
            return bad("n, ensemble_sizes and cost_kinds must be non-empty".into());
        }
        if self.runs == 0 {
            return bad("runs must be >= 1".into());
        }
        if let Some(&n) = self
            .n
            .iter()
            .find(|&&n| !(2..=crate::simulator::DEFAULT_MAX_QUBITS).contains(&n))
        {
            return bad(format!(
                "n = {n} outside 2..={}",
                crate::simulator::DEFAULT_MAX_QUBITS
            ));
        }
        if self.ensemble_sizes.contains(&0) {
            return bad("ensemble sizes must be >= 1".into());
        }
        if let Some(ks) = &self.k {
            if ks.is_empty() {
                return bad("k list must be non-empty".into());
            }
            for &n in &self.n {
                if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > n) {
                    return bad(format!("k = {k} invalid for n = {n}"));
                }
            }
        }
        if self.early_stop && self.max_steps < EarlyStop::default().window {
            return bad("early stopping needs max_steps >= 100".into());
        }
        if self.max_steps == 0 {
            return bad("max_steps must be >= 1".into());
        }
        if self.shots == Some(0) {
            return bad("shots must be >= 1".into());
        }
        Ok(())
    }

    fn ks_for(&self, n: usize) -> Vec<usize> {
        match (&self.k, self.experiment) {
            (Some(ks), _) => ks.clone(),
            (None, ExperimentKind::SweepK) => (1..=n).collect(),
            (None, _) => vec![default_k(n)],
        }
    }

    fn training_config(&self, kind: CostKind, seed: u64) -> TrainingConfig {
        let mut cfg = TrainingConfig::new(kind);
        cfg.max_steps = self.max_steps;
        cfg.early_stop.enabled = self.early_stop;
        cfg.seed = seed;
        if let Some(shots) = self.shots {
            cfg.estimator = Estimator::Shots { shots };
        }
        cfg
    }
}

/// Seeds used by one run; all derived from the base seed and run index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSeeds {
    pub problem: u64,
    pub ensemble: u64,
    pub training: u64,
}

impl RunSeeds {
    pub fn new(base: u64, run: usize) -> Self {
        let r = 3 * run as u64;
        Self {
            problem: derive_seed(base, r),
            ensemble: derive_seed(base, r + 1),
            training: derive_seed(base, r + 2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cell {
    n: usize,
    k: usize,
    ensemble_size: usize,
    cost_kind: CostKind,
}

fn problem_for(cfg: &ResolvedConfig, cell: &Cell, seeds: RunSeeds) -> Result<CompilationProblem> {
    let spec = EnsembleSpec {
        n: cell.n,
        size: cell.ensemble_size,
        mode: cfg.ensemble_mode,
        seed: seeds.ensemble,
    };
    make_problem_with_layout(
        cell.n,
        cfg.entanglement,
        cfg.layout,
        cell.k,
        spec,
        seeds.problem,
    )
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| QwcError::Config(format!("cannot start worker pool: {e}")))
}

type RunResult = (Cell, usize, RunSeeds, Result<TrainingRecord>);

/// Trains every (cell, run) pair in parallel; results keep task order.
fn train_cells(cfg: &ResolvedConfig, cells: &[Cell], jobs: usize) -> Result<Vec<RunResult>> {
    let tasks: Vec<(Cell, usize)> = cells
        .iter()
        .flat_map(|c| (0..cfg.runs).map(move |r| (*c, r)))
        .collect();
    let pool = thread_pool(jobs)?;
    Ok(pool.install(|| {
        tasks
            .par_iter()
            .map(|&(cell, run)| {
                let seeds = RunSeeds::new(cfg.seed, run);
                let result = problem_for(cfg, &cell, seeds).and_then(|p| {
                    compile(&p, &cfg.training_config(cell.cost_kind, seeds.training))
                });
                (cell, run, seeds, result)
            })
            .collect()
    }))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    use std::io::Write;
    writeln!(f)?;
    Ok(())
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seeds: RunSeeds,
    pub success: bool,
    pub final_cost: f64,
    pub infidelity: f64,
    /// `1 / final_cost`; absent when the cost reached exactly zero.
    pub inverse_training_error: Option<f64>,
    pub steps_run: usize,
    pub stop_reason: StopReason,
    pub history_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileCell {
    pub n: usize,
    pub k: usize,
    pub ensemble_size: usize,
    pub cost_kind: CostKind,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub final_costs: Vec<f64>,
    pub final_infidelities: Vec<f64>,
    pub records: Vec<RunSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompileSummary {
    pub config: ResolvedConfig,
    pub cells: Vec<CompileCell>,
}

fn compile_cells(cfg: &ResolvedConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &n in &cfg.n {
        for k in cfg.ks_for(n) {
            for &ensemble_size in &cfg.ensemble_sizes {
                for &cost_kind in &cfg.cost_kinds {
                    cells.push(Cell {
                        n,
                        k,
                        ensemble_size,
                        cost_kind,
                    });
                }
            }
        }
    }
    cells
}

fn cell_tag(c: &Cell) -> String {
    format!("n{}_k{}_a{}_{}", c.n, c.k, c.ensemble_size, c.cost_kind)
}

/// Aggregated successes per cell, in cell order.
fn aggregate(cells: &[Cell], results: &[RunResult]) -> Vec<(Cell, usize, usize)> {
    cells
        .iter()
        .map(|cell| {
            let recs: Vec<&TrainingRecord> = results
                .iter()
                .filter(|(c, ..)| c == cell)
                .filter_map(|(.., r)| r.as_ref().ok())
                .collect();
            (*cell, recs.iter().filter(|r| r.success).count(), recs.len())
        })
        .collect()
}

/// Single compilations: per-run history CSVs plus `summary.json`.
pub fn run_compile(cfg: &ResolvedConfig, jobs: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&cfg.output)?;
    let cells = compile_cells(cfg);
    let results = train_cells(cfg, &cells, jobs)?;
    let mut written = Vec::new();
    let mut summary_cells = Vec::new();
    let mut errors = Vec::new();
    for cell in &cells {
        let mut records = Vec::new();
        for (c, run, seeds, result) in results.iter().filter(|(c, ..)| c == cell) {
            let rec = match result {
                Ok(rec) => rec,
                Err(e) => {
                    errors.push(format!("{} run {run}: {e}", cell_tag(c)));
                    continue;
                }
            };
            let name = format!("history_{}_run{:03}.csv", cell_tag(c), run);
            let path = cfg.output.join(&name);
            rec.write_history_csv(BufWriter::new(File::create(&path)?))?;
            written.push(path);
            records.push(RunSummary {
                run: *run,
                seeds: *seeds,
                success: rec.success,
                final_cost: rec.final_cost,
                infidelity: rec.infidelity,
                inverse_training_error: (rec.final_cost > 0.0).then(|| 1.0 / rec.final_cost),
                steps_run: rec.steps_run,
                stop_reason: rec.stop_reason,
                history_file: name,
            });
        }
        let successes = records.iter().filter(|r| r.success).count();
        summary_cells.push(CompileCell {
            n: cell.n,
            k: cell.k,
            ensemble_size: cell.ensemble_size,
            cost_kind: cell.cost_kind,
            runs: records.len(),
            successes,
            success_rate: if records.is_empty() {
                0.0
            } else {
                successes as f64 / records.len() as f64
            },
            final_costs: records.iter().map(|r| r.final_cost).collect(),
            final_infidelities: records.iter().map(|r| r.infidelity).collect(),
            records,
        });
    }
    let path = cfg.output.join("summary.json");
    write_json(
        &path,
        &CompileSummary {
            config: cfg.clone(),
            cells: summary_cells,
        },
    )?;
    written.push(path);
    if !errors.is_empty() {
        return Err(QwcError::Config(format!(
            "{} run(s) failed: {}",
            errors.len(),
            errors.join("; ")
        )));
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepKRow {
    pub n: usize,
    pub entanglement: Entanglement,
    pub k: usize,
    pub ensemble_size: usize,
    pub success_rate: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepStatesRow {
    pub n: usize,
    pub ensemble_size: usize,
    pub cost_kind: CostKind,
    pub success_rate: f64,
    pub runs: usize,
}

fn sweep(cfg: &ResolvedConfig, jobs: usize) -> Result<Vec<(Cell, usize, usize)>> {
    let cells = compile_cells(cfg);
    let results = train_cells(cfg, &cells, jobs)?;
    let agg = aggregate(&cells, &results);
    let errors: Vec<String> = results
        .iter()
        .filter_map(|(c, run, _, r)| {
            r.as_ref()
                .err()
                .map(|e| format!("{} run {run}: {e}", cell_tag(c)))
        })
        .collect();
    if !errors.is_empty() {
        return Err(QwcError::Config(format!(
            "{} run(s) failed: {}",
            errors.len(),
            errors.join("; ")
        )));
    }
    Ok(agg)
}

/// Success rate against locality `k`; writes `sweep_k.csv`.
pub fn run_sweep_k(cfg: &ResolvedConfig, jobs: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&cfg.output)?;
    let rows: Vec<SweepKRow> = sweep(cfg, jobs)?
        .into_iter()
        .map(|(cell, successes, runs)| SweepKRow {
            n: cell.n,
            entanglement: cfg.entanglement,
            k: cell.k,
            ensemble_size: cell.ensemble_size,
            success_rate: successes as f64 / runs as f64,
            runs,
        })
        .collect();
    let path = cfg.output.join("sweep_k.csv");
    write_csv(&path, &rows)?;
    Ok(vec![path])
}

/// Success rate against ensemble size; writes `sweep_states.csv`.
pub fn run_sweep_states(cfg: &ResolvedConfig, jobs: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&cfg.output)?;
    let rows: Vec<SweepStatesRow> = sweep(cfg, jobs)?
        .into_iter()
        .map(|(cell, successes, runs)| SweepStatesRow {
            n: cell.n,
            ensemble_size: cell.ensemble_size,
            cost_kind: cell.cost_kind,
            success_rate: successes as f64 / runs as f64,
            runs,
        })
        .collect();
    let path = cfg.output.join("sweep_states.csv");
    write_csv(&path, &rows)?;
    Ok(vec![path])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarrenPlateauRow {
    pub n: usize,
    pub cost_kind: CostKind,
    pub mean_l1: f64,
    pub mean_l2: f64,
    pub runs: usize,
}

/// Mean step-one gradient norms for each `n` and cost kind.
pub fn barren_plateau_rows(cfg: &ResolvedConfig, jobs: usize) -> Result<Vec<BarrenPlateauRow>> {
    let cells: Vec<Cell> = compile_cells(cfg);
    let tasks: Vec<(Cell, usize)> = cells
        .iter()
        .flat_map(|c| (0..cfg.runs).map(move |r| (*c, r)))
        .collect();
    let pool = thread_pool(jobs)?;
    let norms: Vec<Result<(f64, f64)>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(cell, run)| {
                let p = problem_for(cfg, &cell, RunSeeds::new(cfg.seed, run))?;
                let g = cost_gradient(&p, p.initial_params(), cell.cost_kind)?;
                Ok((g.l1_norm, g.l2_norm))
            })
            .collect()
    });
    let norms = first_error(norms)?;
    Ok(cells
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let chunk = &norms[i * cfg.runs..(i + 1) * cfg.runs];
            let runs = chunk.len();
            BarrenPlateauRow {
                n: cell.n,
                cost_kind: cell.cost_kind,
                mean_l1: chunk.iter().map(|g| g.0).sum::<f64>() / runs as f64,
                mean_l2: chunk.iter().map(|g| g.1).sum::<f64>() / runs as f64,
                runs,
            }
        })
        .collect())
}

/// Writes `barren_plateau.csv`.
pub fn run_barren_plateau(cfg: &ResolvedConfig, jobs: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(&cfg.output)?;
    let rows = barren_plateau_rows(cfg, jobs)?;
    let path = cfg.output.join("barren_plateau.csv");
    write_csv(&path, &rows)?;
    Ok(vec![path])
}

/// Dispatches on the manifest's experiment kind.
pub fn run(cfg: &ResolvedConfig, jobs: usize) -> Result<Vec<PathBuf>> {
    match cfg.experiment {
        ExperimentKind::Compile => run_compile(cfg, jobs),
        ExperimentKind::SweepK => run_sweep_k(cfg, jobs),
        ExperimentKind::SweepStates => run_sweep_states(cfg, jobs),
        ExperimentKind::BarrenPlateau => run_barren_plateau(cfg, jobs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_experiment() {
        let c = ExperimentConfig::new(ExperimentKind::SweepStates)
            .resolve()
            .unwrap();
        assert_eq!(c.n, (3..=8).collect::<Vec<_>>());
        assert_eq!(c.ensemble_sizes, (2..=16).collect::<Vec<_>>());
        assert_eq!(c.ks_for(5), vec![3]);
        let c = ExperimentConfig::new(ExperimentKind::SweepK)
            .resolve()
            .unwrap();
        assert_eq!(c.runs, 30);
        assert_eq!(c.ks_for(4), vec![1, 2, 3, 4]);
        let c = ExperimentConfig::new(ExperimentKind::BarrenPlateau)
            .resolve()
            .unwrap();
        assert_eq!(c.runs, 100);
        assert_eq!(c.ensemble_sizes, vec![8]);
        assert_eq!(c.entanglement, Entanglement::Linear);
    }

    #[test]
    fn rejects_bad_manifests() {
        let mut c = ExperimentConfig::new(ExperimentKind::Compile);
        c.runs = Some(0);
        assert!(c.resolve().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::Compile);
        c.n = Some(vec![3]);
        c.k = Some(vec![4]);
        assert!(c.resolve().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::Compile);
        c.n = Some(vec![]);
        assert!(c.resolve().is_err());
        assert!(
            serde_json::from_str::<ExperimentConfig>(r#"{"experiment":"compile","bogus":1}"#)
                .is_err()
        );
    }

    #[test]
    fn manifest_json() {
        let c: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"sweep_k","n":[4],"entanglement":"full","runs":3,"cost_kinds":["qwc"]}"#,
        )
        .unwrap();
        let r = c.resolve().unwrap();
        assert_eq!(r.experiment, ExperimentKind::SweepK);
        assert_eq!(r.runs, 3);
    }

    #[test]
    fn default_k_is_ceiling() {
        assert_eq!(default_k(3), 2);
        assert_eq!(default_k(4), 2);
        assert_eq!(default_k(7), 4);
    }

    #[test]
    fn seeds_depend_on_run_only() {
        assert_eq!(RunSeeds::new(5, 2), RunSeeds::new(5, 2));
        assert_ne!(RunSeeds::new(5, 2), RunSeeds::new(5, 3));
        let s = RunSeeds::new(5, 2);
        assert_ne!(s.problem, s.ensemble);
    }
}
