//! k-local W1 distances between product and entangled states, with the
//! optimal Lipschitz Hamiltonian found by the LP.
use std::f64::consts::FRAC_1_SQRT_2 as H;

use num_complex::Complex64;
use qwc::wasserstein::trace_norm_pure;
use qwc::{w1_distance, StateVector};

fn main() -> qwc::Result<()> {
    let zero = StateVector::zero(1);
    let one = StateVector::basis(1, 1);
    let plus = StateVector::product(&[[Complex64::new(H, 0.0), Complex64::new(H, 0.0)]]);
    println!("W1(|0>, |1>) = {}", w1_distance(&zero, &one, 1)?.value);
    println!("W1(|0>, |+>) = {}", w1_distance(&zero, &plus, 1)?.value);

    // |000> against |111>: far apart in W1, maximally distant in trace norm too
    let a = StateVector::zero(3);
    let b = StateVector::basis(3, 0b111);
    let ghz = StateVector::from_amplitudes(
        (0..8)
            .map(|i| {
                if i == 0 || i == 7 {
                    1.0.into()
                } else {
                    0.0.into()
                }
            })
            .collect(),
    )?;
    for (name, other) in [("|111>", &b), ("GHZ", &ghz)] {
        println!(
            "\n|000> vs {name}: trace norm {:.4}",
            trace_norm_pure(&a, other)?
        );
        for k in 1..=3 {
            let est = w1_distance(&a, other, k)?;
            println!("  k={k}: W1 = {:.4}", est.value);
            for t in est.hamiltonian.active_terms() {
                println!("    {:+.3} {}", t.weight, t.pauli);
            }
        }
    }
    Ok(())
}
