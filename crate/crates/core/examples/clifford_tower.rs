//! Builds connecting operators for every even n up to 16.

use std::time::Instant;

use hypercomplex::clifford::{build, compute_spin_metric, dimension_crossover};

fn main() -> hypercomplex::Result<()> {
    for n in (2..=16).step_by(2) {
        let start = Instant::now();
        let ops = build(n)?;
        println!(
            "n = {n:2}  N = {:3}  residual {:.1e}  n vs N: {:?}  g = {:?}  ({:.2?})",
            ops.spinor_dim(),
            ops.clifford_residual(),
            dimension_crossover(n),
            ops.g,
            start.elapsed()
        );
        if n % 8 == 0 {
            let eps = compute_spin_metric(&ops)?;
            println!("         spin metric lowering residual {:.1e}", eps.lowering_residual);
        }
    }
    Ok(())
}
