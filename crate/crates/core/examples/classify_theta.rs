//! Eigenvalue classes of a few controlling spin-tensors at n = 8.

use hypercomplex::clifford::{build, compute_spin_metric};
use hypercomplex::forge::{octonion_spinor, theta_from_decomposition};
use hypercomplex::numerics::{ONE, ZERO};
use num_complex::Complex64;
use hypercomplex::symmetry::classify_theta;

fn main() -> hypercomplex::Result<()> {
    let ops = build(8)?;
    let eps = compute_spin_metric(&ops)?;
    let oct = octonion_spinor(&ops, &eps)?;

    let mut x2 = vec![ZERO; 8];
    x2[1] = ONE;
    x2[5] = ONE;
    let x1 = oct.decomposition.as_ref().expect("decomposed").parts[0].1.clone();
    let half = Complex64::new(0.5, 0.0);
    let cases = [
        ("octonion", oct.theta.clone()),
        ("theta_0", theta_from_decomposition(&eps, &[]).theta),
        // alphas summing to one drop the eps term
        ("two parts", theta_from_decomposition(&eps, &[(half, x1), (half, x2)]).theta),
    ];
    for (name, theta) in cases {
        let c = classify_theta(&eps, &theta)?;
        println!("{name:>10}: {} significant, {}", c.significant, c.label);
    }
    Ok(())
}
