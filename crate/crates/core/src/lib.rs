//! Variational compilation of quantum circuits with a k-local quantum
//! Wasserstein (earth mover's) cost, alongside Hilbert-Schmidt and
//! Loschmidt-echo baselines.
//!
//! The pipeline is: build a target and an ansatz ([`ansatz`]), simulate them
//! on probe states ([`simulator`]), estimate the W1 distance between their
//! outputs through a small LP over Pauli expectations ([`pauli`], [`lp`],
//! [`wasserstein`]), and train the ansatz with ADAM on parameter-shift
//! gradients ([`costs`], [`gradients`], [`optimize`]). Experiment sweeps
//! that write CSV/JSON live in [`experiments`].

pub mod ansatz;
pub mod costs;
pub mod error;
pub mod experiments;
pub mod gradients;
pub mod lp;
pub mod optimize;
pub mod pauli;
pub mod simulator;
pub mod verify;
pub mod wasserstein;

pub use ansatz::{build_hea, make_problem, EnsembleMode, EnsembleSpec, Entanglement};
pub use costs::{CompilationProblem, CostKind};
pub use error::{QwcError, Result};
pub use optimize::{compile, TrainingConfig, TrainingRecord};
pub use pauli::{enumerate_k_local, ObservableSet, Pauli, PauliString};
pub use simulator::{ParamCircuit, StateVector, UnitaryMatrix};
pub use wasserstein::{w1_distance, W1Estimate, WassersteinHamiltonian};
