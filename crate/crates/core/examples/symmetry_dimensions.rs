//! so(8), its subalgebra fixing the unit, and the one also fixing theta.

use hypercomplex::clifford::{build, compute_spin_metric};
use hypercomplex::forge::{inclusion_operator, octonion_spinor, structural_constants};
use hypercomplex::symmetry::{derivation_dimension, so_dimension, stabilizer_dimension, StabilizerOptions};

fn main() -> hypercomplex::Result<()> {
    let ops = build(8)?;
    let eps = compute_spin_metric(&ops)?;
    let theta = octonion_spinor(&ops, &eps)?;
    let h = inclusion_operator(&ops.g)?;
    let t = structural_constants(&ops, &theta, &h)?;
    let e = t.identity().expect("unit");
    let e_base: Vec<_> = e.coords.iter().zip(&h.h).map(|(x, hi)| x * hi).collect();

    let dim = |fix_direction, fix_theta| {
        stabilizer_dimension(
            &ops,
            &StabilizerOptions {
                fix_direction,
                fix_theta,
                ..Default::default()
            },
        )
    };
    println!("so(8):                 {}", so_dimension(8));
    println!("fixing the unit:       {}", dim(Some(e_base.clone()), None)?);
    println!("fixing theta:          {}", dim(None, Some(theta.theta.clone()))?);
    println!("fixing both:           {}", dim(Some(e_base), Some(theta.theta.clone()))?);
    println!("derivations of table:  {}", derivation_dimension(&t)?);
    Ok(())
}
