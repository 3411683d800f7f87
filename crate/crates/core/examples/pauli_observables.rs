//! Enumerate k-local Pauli observables and estimate expectations exactly and
//! from simulated shots.
use qwc::pauli::{count_k_local, pauli_expectation_shots, Estimator};
use qwc::{enumerate_k_local, PauliString, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qwc::Result<()> {
    for (n, k) in [(3, 1), (4, 2), (8, 4)] {
        println!("n={n} k={k}: {} observables", count_k_local(n, k));
    }

    let obs = enumerate_k_local(2, 2)?;
    let bell = StateVector::from_amplitudes(vec![1.0.into(), 0.0.into(), 0.0.into(), 1.0.into()])?;
    for (p, e) in obs.strings().iter().zip(obs.expectations(&bell)?) {
        if e.abs() > 1e-12 {
            println!("<{p}> = {e:+.3}");
        }
    }

    let zz: PauliString = "ZZ".parse()?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let est = pauli_expectation_shots(&bell, &zz, 1000, &mut rng)?;
    println!("<ZZ> from 1000 shots: {est:+.3}");
    let shots = Estimator::Shots { shots: 100 };
    println!(
        "<ZZ> from 100 shots:  {:+.3}",
        shots.expectation(&bell, &zz, &mut rng)?
    );
    Ok(())
}
