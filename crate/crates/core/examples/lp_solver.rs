//! Solve a textbook linear program with the built-in simplex.
use qwc::lp::{solve_simplex, LinearProgram};

fn main() -> qwc::Result<()> {
    // maximize 3x + 5y  s.t.  x <= 4,  2y <= 12,  3x + 2y <= 18
    let lp = LinearProgram::from_rows(
        vec![3.0, 5.0],
        &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
        vec![4.0, 12.0, 18.0],
    )?;
    let sol = solve_simplex(&lp)?;
    println!("status {:?} after {} pivots", sol.status, sol.iterations);
    println!("x = {:?}, objective = {}", sol.x, sol.objective_value);
    Ok(())
}
