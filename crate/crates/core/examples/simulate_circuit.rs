//! Build a small parametrized circuit, run it on |000>, and print the state,
//! its unitary's deviation from unitarity, and the JSON form of the circuit.
use std::f64::consts::FRAC_PI_2;

use qwc::simulator::{Angle, BoundCircuit, Gate};
use qwc::{ParamCircuit, StateVector};

fn main() -> qwc::Result<()> {
    // GHZ preparation: a Hadamard-like RY(pi/2) and a CX ladder
    let circuit = ParamCircuit::new(
        3,
        vec![
            Gate::ry(0, Angle::Param(0)),
            Gate::rz(0, Angle::Param(1)),
            Gate::cx(0, 1),
            Gate::cx(1, 2),
        ],
        2,
    )?;
    let params = [FRAC_PI_2, 0.0];
    let out = circuit.apply(&params, &StateVector::zero(3))?;
    println!("output state:\n{out}");

    let u = circuit.unitary(&params)?;
    println!("unitarity error: {:.2e}", u.unitarity_error());

    let bound = BoundCircuit::new(&circuit, &params)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&bound).expect("serializable")
    );
    Ok(())
}
