//! Adversarial training loop: per step the discriminator LP is solved for
//! every probe state, then the generator takes one ADAM step on the
//! resulting cost gradient.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{random_product_ensemble, EnsembleMode};
use crate::costs::{infidelity, mean_square, CompilationProblem, CostKind, TargetData};
use crate::error::{check_dim, QwcError, Result};
use crate::gradients::{qwc_gradient_from, value_and_gradient, CostEvaluation};
use crate::pauli::Estimator;
use crate::wasserstein::{w1_from_differences, W1Estimate};

pub const DEFAULT_BETA1: f64 = 0.9;
pub const DEFAULT_BETA2: f64 = 0.999;
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Bias-corrected ADAM moments.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub t: u64,
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(len: usize, lr: f64) -> Self {
        Self {
            t: 0,
            m: vec![0.0; len],
            v: vec![0.0; len],
            lr,
            beta1: DEFAULT_BETA1,
            beta2: DEFAULT_BETA2,
            eps: DEFAULT_EPSILON,
        }
    }

    /// One update of `params` in place.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        check_dim(self.m.len(), params.len())?;
        check_dim(self.m.len(), grad.len())?;
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t as i32);
        let bc2 = 1.0 - self.beta2.powi(self.t as i32);
        for i in 0..params.len() {
            let g = grad[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
        Ok(())
    }
}

/// Functional form of [`AdamState::step`].
pub fn adam_step(state: &AdamState, params: &[f64], grad: &[f64]) -> Result<(AdamState, Vec<f64>)> {
    let mut next = state.clone();
    let mut out = params.to_vec();
    next.step(&mut out, grad)?;
    Ok((next, out))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EarlyStop {
    pub enabled: bool,
    pub window: usize,
    pub variance_threshold: f64,
}

impl Default for EarlyStop {
    fn default() -> Self {
        Self {
            enabled: false,
            window: 100,
            variance_threshold: 1e-8,
        }
    }
}

impl EarlyStop {
    pub fn on() -> Self {
        Self {
            enabled: true,
            ..Self::default()
        }
    }
}

/// True iff the population variance of the last `window` costs is below
/// `threshold`. Histories shorter than the window never stop.
pub fn early_stop_check(history: &[f64], window: usize, threshold: f64) -> bool {
    if window == 0 || history.len() < window {
        return false;
    }
    let tail = &history[history.len() - window..];
    let mean = tail.iter().sum::<f64>() / window as f64;
    let var = tail.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / window as f64;
    var < threshold
}

pub fn default_learning_rate(kind: CostKind) -> f64 {
    match kind {
        CostKind::Qwc => 0.1,
        CostKind::Hst | CostKind::Let => 0.04,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub cost_kind: CostKind,
    pub max_steps: usize,
    pub success_threshold: f64,
    pub early_stop: EarlyStop,
    pub lr: f64,
    pub seed: u64,
    #[serde(default)]
    pub estimator: Estimator,
}

impl TrainingConfig {
    /// Defaults for a cost kind: 1000 steps, threshold 1e-3, no early stop.
    pub fn new(cost_kind: CostKind) -> Self {
        Self {
            cost_kind,
            max_steps: 1000,
            success_threshold: 1e-3,
            early_stop: EarlyStop::default(),
            lr: default_learning_rate(cost_kind),
            seed: 0,
            estimator: Estimator::Exact,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(QwcError::Config(msg.to_string()));
        if self.max_steps == 0 {
            return bad("max_steps must be >= 1");
        }
        if !(self.success_threshold > 0.0) {
            return bad("success_threshold must be > 0");
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad("lr must be a positive finite number");
        }
        if self.early_stop.enabled {
            if !(self.early_stop.variance_threshold > 0.0) {
                return bad("early-stop variance threshold must be > 0");
            }
            if self.early_stop.window == 0 || self.early_stop.window > self.max_steps {
                return bad("early-stop window must be in 1..=max_steps");
            }
        }
        if let Estimator::Shots { shots: 0 } = self.estimator {
            return bad("shots must be >= 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub cost: f64,
    pub grad_l1: f64,
    pub grad_l2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxSteps,
    EarlyStop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub cost_kind: CostKind,
    pub history: Vec<StepRecord>,
    pub final_params: Vec<f64>,
    pub final_cost: f64,
    /// `1 - F_avg` of the final ansatz against the target.
    pub infidelity: f64,
    pub success: bool,
    /// First step whose cost fell below the success threshold.
    pub first_success_step: Option<usize>,
    pub steps_run: usize,
    pub stop_reason: StopReason,
    /// Target-side Pauli expectations evaluated over the run.
    pub target_evaluations: usize,
}

impl TrainingRecord {
    /// Writes `step,cost,grad_l1,grad_l2` rows.
    pub fn write_history_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.history {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn costs(&self) -> Vec<f64> {
        self.history.iter().map(|r| r.cost).collect()
    }
}

fn target_for(
    problem: &CompilationProblem,
    config: &TrainingConfig,
    rng: &mut ChaCha8Rng,
    states: Vec<crate::simulator::StateVector>,
) -> Result<TargetData> {
    let qwc = config.cost_kind == CostKind::Qwc;
    match config.estimator {
        Estimator::Exact => TargetData::new(problem, states, qwc),
        Estimator::Shots { .. } => {
            let mut data = TargetData::new(problem, states, false)?;
            if qwc {
                let exps = data
                    .outputs
                    .iter()
                    .map(|o| config.estimator.expectations(o, problem.observables(), rng))
                    .collect::<Result<Vec<_>>>()?;
                data.expectations = Some(exps);
            }
            Ok(data)
        }
    }
}

fn evaluate_step(
    problem: &CompilationProblem,
    target: &TargetData,
    config: &TrainingConfig,
    params: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<CostEvaluation> {
    match (config.cost_kind, config.estimator) {
        (CostKind::Qwc, Estimator::Shots { .. }) => {
            let cache = target
                .expectations
                .as_ref()
                .expect("target expectations are cached");
            let estimates = target
                .states
                .iter()
                .zip(cache)
                .map(|(psi, tgt)| {
                    let gen = problem.ansatz().apply(params, psi)?;
                    let exps = config
                        .estimator
                        .expectations(&gen, problem.observables(), rng)?;
                    let c = exps.iter().zip(tgt).map(|(g, t)| g - t).collect();
                    w1_from_differences(c, problem.observables())
                })
                .collect::<Result<Vec<W1Estimate>>>()?;
            let gradient = qwc_gradient_from(problem, target, params, &estimates)?;
            Ok(CostEvaluation {
                cost: mean_square(&estimates),
                gradient,
                estimates: Some(estimates),
            })
        }
        (kind, _) => value_and_gradient(problem, target, kind, params),
    }
}

/// Trains the ansatz of `problem` from its initial parameters.
pub fn compile(problem: &CompilationProblem, config: &TrainingConfig) -> Result<TrainingRecord> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let spec = *problem.ensemble_spec();
    let resample = spec.mode == EnsembleMode::Resampled;

    let mut target = target_for(problem, config, &mut rng, problem.ensemble().to_vec())?;
    let mut target_evaluations = target.cached_evaluations();

    let mut params = problem.initial_params().to_vec();
    let mut adam = AdamState::new(params.len(), config.lr);
    let mut history = Vec::with_capacity(config.max_steps);
    let mut costs = Vec::with_capacity(config.max_steps);
    let mut first_success_step = None;
    let mut stop_reason = StopReason::MaxSteps;

    for step in 1..=config.max_steps {
        if resample && step > 1 {
            let states = random_product_ensemble(&spec, &mut rng)?;
            target = target_for(problem, config, &mut rng, states)?;
            target_evaluations += target.cached_evaluations();
        }
        let eval = evaluate_step(problem, &target, config, &params, &mut rng)?;
        if !eval.cost.is_finite() {
            return Err(QwcError::InvalidArgument(format!(
                "non-finite cost at step {step}"
            )));
        }
        history.push(StepRecord {
            step,
            cost: eval.cost,
            grad_l1: eval.gradient.l1_norm,
            grad_l2: eval.gradient.l2_norm,
        });
        costs.push(eval.cost);
        if first_success_step.is_none() && eval.cost < config.success_threshold {
            first_success_step = Some(step);
        }
        let es = config.early_stop;
        if es.enabled && early_stop_check(&costs, es.window, es.variance_threshold) {
            stop_reason = StopReason::EarlyStop;
            break;
        }
        if step == config.max_steps {
            break;
        }
        adam.step(&mut params, &eval.gradient.grad)?;
    }

    let final_cost = *costs.last().expect("at least one step runs");
    Ok(TrainingRecord {
        cost_kind: config.cost_kind,
        steps_run: history.len(),
        history,
        infidelity: infidelity(problem, &params)?,
        final_params: params,
        final_cost,
        success: final_cost < config.success_threshold,
        first_success_step,
        stop_reason,
        target_evaluations,
    })
}
