//! The octonion pattern at n = 16: weakly alternative, with zero divisors.

use hypercomplex::forge::forge_octonion_pattern;
use hypercomplex::identities::{find_zero_divisors, run_suite, CheckOptions};

fn main() -> hypercomplex::Result<()> {
    let t = forge_octonion_pattern(16)?;
    let names = [
        "weak-alternative",
        "flexible",
        "power-associative",
        "alternative",
        "weak-normalization",
        "full-normalization",
    ];
    for r in run_suite(&t, &names, &CheckOptions::default())? {
        let w = r.witness.as_ref().map(|w| w.description.clone()).unwrap_or_default();
        println!("{:>20}: {:?} ({:.1e}) {w}", r.identity, r.verdict, r.max_residual());
    }
    let zd = find_zero_divisors(&t, 2)?;
    println!("{} zero-divisor pairs, first: {:?}", zd.len(), zd.first());
    Ok(())
}
