//! Lifts random reflections to spinor space and checks the infinitesimal
//! homomorphism on random generators.

use hypercomplex::clifford::build;
use hypercomplex::numerics::CMat;
use hypercomplex::symmetry::{homomorphism_residual, lift_reflection, InfinitesimalRotation, Reflection};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> hypercomplex::Result<()> {
    let ops = build(8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let r: Vec<Complex64> = (0..8).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let lift = lift_reflection(&ops, &Reflection::new(&r, &ops.g)?)?;
        worst = worst.max(lift.residual);
    }
    println!("reflection lift, worst residual over 20: {worst:.1e}");

    let mut gen = || {
        let a = CMat::from_fn(8, 8, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        InfinitesimalRotation::new(&a - &a.transpose())
    };
    let (t1, t2) = (gen()?, gen()?);
    println!("homomorphism residual: {:.1e}", homomorphism_residual(&ops, &t1, &t2));
    Ok(())
}
