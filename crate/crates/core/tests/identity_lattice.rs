mod common;

use hypercomplex::cayley_dickson::algebra;
use hypercomplex::forge::forge_octonion_pattern;
use hypercomplex::identities::*;
use hypercomplex::StructureTable;

fn tables() -> Vec<(String, StructureTable)> {
    let mut out: Vec<(String, StructureTable)> =
        (0..=5).map(|l| (format!("cayley-dickson level {l}"), algebra(l).unwrap())).collect();
    out.push(("forged n=8".into(), forge_octonion_pattern(8).unwrap()));
    out.push(("forged n=16".into(), forge_octonion_pattern(16).unwrap()));
    out
}

#[test]
fn implication_lattice_holds_residualwise() {
    let opts = CheckOptions { samples: 100, ..Default::default() };
    for (name, t) in tables() {
        let assoc = check_associative(&t, &opts).max_residual();
        let alt = check_alternative(&t, &opts).max_residual();
        let flex = check_flexible(&t, &opts).max_residual();
        let pow = check_power_associative(&t, &opts).max_residual();
        // associative => alternative => flexible and power-associative
        if assoc <= opts.tolerance {
            assert!(alt <= 4.0 * assoc.max(1e-15), "{name}");
        }
        if alt <= opts.tolerance {
            assert!(flex <= 4.0 * alt.max(1e-15) && pow <= 4.0 * alt.max(1e-15), "{name}");
        }
    }
}

#[test]
fn full_normalization_only_at_eight() {
    let opts = CheckOptions::default();
    let [w8, f8] = check_normalization(&forge_octonion_pattern(8).unwrap(), &opts);
    assert!(w8.holds() && f8.holds());
    let [w16, f16] = check_normalization(&forge_octonion_pattern(16).unwrap(), &opts);
    assert!(w16.holds() && !f16.holds());
    let [_, fo] = check_normalization(&algebra(3).unwrap(), &opts);
    assert!(fo.holds());
}

#[test]
fn octonion_metric_is_identity() {
    let r = check_metric_compat(&algebra(3).unwrap(), &CheckOptions::default()).unwrap();
    assert!(r.holds() && r.residual == 0.0);
}

#[test]
fn zero_divisors_appear_after_eight() {
    assert!(find_zero_divisors(&forge_octonion_pattern(8).unwrap(), 2).unwrap().is_empty());
    let zs = find_zero_divisors(&forge_octonion_pattern(16).unwrap(), 2).unwrap();
    assert!(!zs.is_empty());
    for z in zs.iter().take(5) {
        assert!(z.residual <= ZERO_DIVISOR_TOL);
    }
}

#[test]
fn seed_changes_only_sampled_part() {
    let t = algebra(4).unwrap();
    let a = check_flexible(&t, &CheckOptions { seed: 1, ..Default::default() });
    let b = check_flexible(&t, &CheckOptions { seed: 2, ..Default::default() });
    assert_eq!(a.residual, b.residual);
    assert_eq!(a.witness, b.witness);
}
