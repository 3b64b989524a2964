//! Synthesizes the octonions from the n = 8 operators and checks them.

use hypercomplex::forge::forge_octonion_pattern;
use hypercomplex::identities::{run_suite, CheckOptions};
use hypercomplex::symmetry::derivation_dimension;

fn main() -> hypercomplex::Result<()> {
    let t = forge_octonion_pattern(8)?;
    let e = t.identity().expect("forged tables carry their unit");
    println!("unit: {:?}", e.coords.iter().map(|z| z.re).collect::<Vec<_>>());
    println!("lambda: {:?}, max imaginary part {:.1e}", t.lambda, t.max_imag());
    let names = ["alternative", "weak-alternative", "flexible", "power-associative", "normalization", "metric"];
    for r in run_suite(&t, &names, &CheckOptions::default())? {
        println!("{:>20}: {:?} ({:.1e})", r.identity, r.verdict, r.max_residual());
    }
    println!("derivation dimension: {}", derivation_dimension(&t)?);
    Ok(())
}
