//! Multiplication tables of the first Cayley-Dickson algebras.

use hypercomplex::cayley_dickson;
use hypercomplex::identities::{check_alternative, find_zero_divisors, CheckOptions};
use hypercomplex::table::{multiply, AlgebraElement};

fn main() -> hypercomplex::Result<()> {
    let h = cayley_dickson::quaternions();
    let e = |i| AlgebraElement::basis(4, i);
    println!("quaternions: e1 e2 = {:?}", multiply(&h, &e(1), &e(2))?.coords);

    let opts = CheckOptions::default();
    for (name, levels) in [("complex", 1), ("quaternions", 2), ("octonions", 3), ("sedenions", 4)] {
        let t = cayley_dickson::algebra(levels)?;
        let alt = check_alternative(&t, &opts);
        let zd = find_zero_divisors(&t, 2)?;
        println!(
            "{name:>12}: dim {:2}, alternative {:?} (residual {:.1e}), {} zero-divisor pairs",
            t.dim(),
            alt.verdict,
            alt.residual,
            zd.len()
        );
    }
    Ok(())
}
