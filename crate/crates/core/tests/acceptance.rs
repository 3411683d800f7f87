//! Acceptance suite. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see them
//! in order.
mod common;

use std::f64::consts::PI;

use common::*;
use num_complex::Complex64 as C;
use qwc::ansatz::{derive_seed, make_problem_with_layout, HeaLayout};
use qwc::costs::{average_fidelity, evaluate, hst_cost};
use qwc::experiments::{
    barren_plateau_rows, run, CompileSummary, ExperimentConfig, ExperimentKind, SweepKRow,
};
use qwc::gradients::cost_gradient;
use qwc::lp::{solve_simplex, LpStatus};
use qwc::simulator::{Angle, Gate, UnitaryMatrix};
use qwc::wasserstein::QUBIT_WEIGHT_BOUND;
use qwc::{w1_distance, CostKind, EnsembleSpec, Entanglement, ParamCircuit, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0;
const JOBS: usize = 8;

fn report(id: u32, passed: bool, detail: String) {
    println!(
        "criterion {id}: {} {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {id} failed: {detail}");
}

#[test]
fn criterion_1_shift_rule_matches_finite_differences() {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let s = derive_seed(SEED + 1, i);
        let ent = if i % 2 == 0 {
            Entanglement::Full
        } else {
            Entanglement::Linear
        };
        let spec = EnsembleSpec::fixed(3, 8, s.wrapping_add(1));
        let p = make_problem_with_layout(3, ent, HeaLayout::Sandwich, 2, spec, s).unwrap();
        let x = p.initial_params().to_vec();
        for kind in CostKind::ALL {
            let g = cost_gradient(&p, &x, kind).unwrap();
            for j in 0..x.len() {
                let (mut up, mut dn) = (x.clone(), x.clone());
                up[j] += h;
                dn[j] -= h;
                let fd = (evaluate(&p, kind, &up).unwrap() - evaluate(&p, kind, &dn).unwrap())
                    / (2.0 * h);
                worst = worst.max((fd - g.grad[j]).abs());
            }
        }
    }
    report(
        1,
        worst <= 1e-5,
        format!("100 instances x 3 costs, max |shift - fd| = {worst:.2e} (tol 1e-5)"),
    );
}

#[test]
fn criterion_2_lp_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let lp = qwc::verify::random_bounded_lp(&mut rng).unwrap();
        let sol = solve_simplex(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        worst = worst.max((sol.objective_value - brute_force_lp(&lp).unwrap()).abs());
    }
    let (mut load, mut active) = (0.0f64, 0usize);
    for i in 0..200 {
        let n = 2 + i % 3;
        let (a, b) = (haar_state(n, &mut rng), haar_state(n, &mut rng));
        let est = w1_distance(&a, &b, 1 + i % n).unwrap();
        load = load.max(
            est.hamiltonian
                .qubit_loads()
                .into_iter()
                .fold(0.0, f64::max),
        );
        if est.hamiltonian.active_count() > n {
            active += 1;
        }
    }
    let ok = worst <= 1e-8 && load <= QUBIT_WEIGHT_BOUND + 1e-9 && active == 0;
    report(
        2,
        ok,
        format!("200 LPs max err {worst:.2e} (tol 1e-8); max qubit load {load:.12}; {active} optima with > n terms"),
    );
}

#[test]
fn criterion_3_w1_metric_properties() {
    let tol = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut violations = [0usize; 4];
    for i in 0..1000 {
        let n = 2 + i % 3;
        let (a, b, c) = (
            haar_state(n, &mut rng),
            haar_state(n, &mut rng),
            haar_state(n, &mut rng),
        );
        let tn = trace_norm(&a, &b);
        let mut prev = f64::NEG_INFINITY;
        for k in 1..=n {
            let ab = w1_distance(&a, &b, k).unwrap().value;
            let ba = w1_distance(&b, &a, k).unwrap().value;
            let ac = w1_distance(&a, &c, k).unwrap().value;
            let cb = w1_distance(&c, &b, k).unwrap().value;
            violations[0] += ((ab - ba).abs() > tol) as usize;
            violations[1] += (ab > ac + cb + tol) as usize;
            violations[2] += (ab < prev - tol) as usize;
            violations[3] += (ab > n as f64 / 2.0 * tn + tol) as usize;
            prev = ab;
        }
    }
    report(
        3,
        violations.iter().all(|&v| v == 0),
        format!(
            "1000 pairs, violations [symmetry, triangle, monotone, trace bound] = {violations:?}"
        ),
    );
}

#[test]
fn criterion_4_closed_form_values() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = StateVector::zero(1);
    let w01 = w1_distance(&zero, &StateVector::basis(1, 1), 1)
        .unwrap()
        .value;
    let plus = StateVector::product(&[[C::new(h, 0.0), C::new(h, 0.0)]]);
    let w0p = w1_distance(&zero, &plus, 1).unwrap().value;
    let w_err = (w01 - 1.0).abs().max((w0p - 0.5).abs());

    let rz = ParamCircuit::from_gates(1, vec![Gate::rz(0, Angle::Param(0))]).unwrap();
    let id = UnitaryMatrix::identity(1);
    let mut hst_err = 0.0f64;
    for i in 0..=200 {
        let theta = -2.0 * PI + 4.0 * PI * i as f64 / 200.0;
        let expect = 1.0 - (theta / 2.0).cos().powi(2);
        hst_err =
            hst_err.max((hst_cost(&id, &rz.unitary(&[theta]).unwrap()).unwrap() - expect).abs());
    }
    let z = UnitaryMatrix::from_rows(1, vec![1.0.into(), 0.0.into(), 0.0.into(), (-1.0).into()])
        .unwrap();
    let f_err = (average_fidelity(&id, &z).unwrap() - 1.0 / 3.0).abs();
    report(
        4,
        w_err <= 1e-9 && hst_err <= 1e-12 && f_err <= 1e-12,
        format!("W1 err {w_err:.1e} (1e-9), HST grid err {hst_err:.1e} (1e-12), F_avg(I,Z) err {f_err:.1e} (1e-12)"),
    );
}

fn compile_summary(costs: Vec<CostKind>) -> CompileSummary {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::Compile);
    cfg.n = Some(vec![3, 4]);
    cfg.entanglement = Some(Entanglement::Full);
    cfg.ensemble_sizes = Some(vec![8]);
    cfg.runs = Some(10);
    cfg.cost_kinds = Some(costs);
    cfg.seed = Some(SEED);
    cfg.output = Some(dir.path().to_path_buf());
    run(&cfg.resolve().unwrap(), JOBS).unwrap();
    let text = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn criterion_5_qwc_training_success() {
    let summary = compile_summary(vec![CostKind::Qwc]);
    let mut ok = true;
    let mut parts = Vec::new();
    for cell in &summary.cells {
        let worst_success_infid = cell
            .records
            .iter()
            .filter(|r| r.success)
            .map(|r| r.infidelity)
            .fold(0.0, f64::max);
        ok &= cell.success_rate >= 0.6 && worst_success_infid <= 1e-6;
        parts.push(format!(
            "n={} k={}: {}/{} succeeded, worst 1-F_avg among successes {worst_success_infid:.1e}",
            cell.n, cell.k, cell.successes, cell.runs
        ));
    }
    report(
        5,
        ok,
        format!("{} (need >= 60%, 1-F_avg <= 1e-6)", parts.join("; ")),
    );
}

#[test]
fn criterion_6_hst_always_succeeds() {
    let summary = compile_summary(vec![CostKind::Hst]);
    let parts: Vec<String> = summary
        .cells
        .iter()
        .map(|c| format!("n={}: {}/{}", c.n, c.successes, c.runs))
        .collect();
    report(
        6,
        summary.cells.iter().all(|c| c.successes == c.runs),
        format!("HST successes {}", parts.join(", ")),
    );
}

#[test]
fn criterion_7_barren_plateau_trend() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::BarrenPlateau);
    cfg.n = Some((3..=6).collect());
    cfg.runs = Some(50);
    cfg.seed = Some(SEED);
    let rows = barren_plateau_rows(&cfg.resolve().unwrap(), JOBS).unwrap();
    let l2 = |n: usize, k: CostKind| {
        rows.iter()
            .find(|r| r.n == n && r.cost_kind == k)
            .unwrap()
            .mean_l2
    };
    let ratio = |k| l2(3, k) / l2(6, k);
    let (hst, let_, qwc) = (
        ratio(CostKind::Hst),
        ratio(CostKind::Let),
        ratio(CostKind::Qwc),
    );
    report(
        7,
        hst >= 5.0 && let_ >= 5.0 && qwc <= 3.0,
        format!("l2(n=3)/l2(n=6) over 50 runs: hst {hst:.2}, let {let_:.2} (need >= 5), qwc {qwc:.2} (need <= 3)"),
    );
}

#[test]
fn criterion_8_locality_sweep_trend() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::SweepK);
    cfg.n = Some(vec![4]);
    cfg.entanglement = Some(Entanglement::Full);
    cfg.runs = Some(10);
    cfg.seed = Some(SEED);
    cfg.output = Some(dir.path().to_path_buf());
    run(&cfg.resolve().unwrap(), JOBS).unwrap();
    let rows: Vec<SweepKRow> = csv::Reader::from_path(dir.path().join("sweep_k.csv"))
        .unwrap()
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    let rate = |k: usize| rows.iter().find(|r| r.k == k).unwrap().success_rate;
    let trend: Vec<String> = rows
        .iter()
        .map(|r| format!("k={}: {:.1}", r.k, r.success_rate))
        .collect();
    report(
        8,
        rate(4) >= rate(1),
        format!("n=4 success rates {}", trend.join(", ")),
    );
}

fn all_files(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn criterion_9_byte_identical_reruns() {
    let manifests = [
        r#"{"experiment":"compile","n":[3],"runs":3,"max_steps":60,"cost_kinds":["qwc","hst","let"]}"#,
        r#"{"experiment":"sweep_k","n":[3],"runs":3,"max_steps":60}"#,
        r#"{"experiment":"sweep_states","n":[3],"ensemble_sizes":[2,4],"runs":3,"max_steps":60}"#,
        r#"{"experiment":"barren_plateau","n":[3,4],"runs":4}"#,
    ];
    let mut compared = 0;
    let mut identical = true;
    for m in manifests {
        let base: ExperimentConfig = serde_json::from_str(m).unwrap();
        let outputs: Vec<_> = [1, JOBS]
            .iter()
            .map(|&jobs| {
                let dir = tempfile::tempdir().unwrap();
                let mut cfg = base.clone();
                cfg.output = Some(dir.path().to_path_buf());
                run(&cfg.resolve().unwrap(), jobs).unwrap();
                (all_files(dir.path()), dir)
            })
            .collect();
        compared += outputs[0].0.len();
        identical &= !outputs[0].0.is_empty() && outputs[0].0 == outputs[1].0;
    }
    report(
        9,
        identical,
        format!("{compared} CSV files compared across reruns with 1 and {JOBS} workers"),
    );
}
