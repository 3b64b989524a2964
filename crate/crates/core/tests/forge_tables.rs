mod common;

use common::{max_table_diff, setup};
use hypercomplex::forge::{basis_algebra, find_identity, structural_constants, theta_from_decomposition, ControllingSpinor};
use hypercomplex::identities::{check_alternative, check_metric_compat, run_suite, CheckOptions};
use hypercomplex::numerics::{CMat, ONE, ZERO};
use hypercomplex::symmetry::{lift_reflection, Reflection};
use hypercomplex::table::{multiply, AlgebraElement};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn octonion_table_is_real_signed_unit() {
    let s = setup(8);
    let t = structural_constants(&s.ops, &s.theta, &s.h).unwrap();
    assert!(t.max_imag() <= 1e-9);
    for i in 0..8 {
        for j in 0..8 {
            for k in 0..8 {
                let c = t.constant(i, j, k).re;
                let nearest = c.round();
                assert!((c - nearest).abs() < 1e-12 && nearest.abs() <= 1.0);
            }
        }
    }
    assert!(check_metric_compat(&t, &CheckOptions::default()).unwrap().holds());
}

#[test]
fn unit_associates_with_everything() {
    let s = setup(8);
    let t = structural_constants(&s.ops, &s.theta, &s.h).unwrap();
    let e = t.identity().unwrap().clone();
    for i in 0..8 {
        for j in 0..8 {
            let (x, y) = (AlgebraElement::basis(8, i), AlgebraElement::basis(8, j));
            let l = multiply(&t, &multiply(&t, &e, &x).unwrap(), &y).unwrap();
            let r = multiply(&t, &e, &multiply(&t, &x, &y).unwrap()).unwrap();
            assert!(l.sub(&r).max_abs() <= 1e-12);
        }
    }
}

#[test]
fn identity_residual_is_small() {
    let s = setup(8);
    let mut t = structural_constants(&s.ops, &s.theta, &s.h).unwrap();
    let (_, r) = find_identity(&mut t).unwrap();
    assert!(r <= 1e-10);
}

#[test]
fn basis_algebra_of_octonion_spinor_matches() {
    let s = setup(8);
    let t = structural_constants(&s.ops, &s.theta, &s.h).unwrap();
    let x = s.theta.decomposition.as_ref().unwrap().parts[0].1.clone();
    let b = basis_algebra(&s.ops, &s.eps, &x, &s.h).unwrap();
    assert!(max_table_diff(&t, &b) <= 1e-12);
}

#[test]
fn pure_eps_algebra_has_unit() {
    let s = setup(8);
    let t = basis_algebra(&s.ops, &s.eps, &[ZERO; 8], &s.h).unwrap();
    assert!(t.identity().is_some());
    let th0 = theta_from_decomposition(&s.eps, &[]);
    let t0 = structural_constants(&s.ops, &th0, &s.h).unwrap();
    assert!(max_table_diff(&t, &t0) <= 1e-12);
    let opts = CheckOptions::default();
    let reports = run_suite(&t0, &["weak-alternative", "alternative"], &opts).unwrap();
    assert!(reports[0].holds());
    assert!(!reports[1].holds());
}

#[test]
fn parts_summing_to_one_drop_the_eps_term() {
    let s = setup(8);
    let x = s.theta.decomposition.as_ref().unwrap().parts[0].1.clone();
    let a = Complex64::new(0.3, 0.0);
    let th = theta_from_decomposition(&s.eps, &[(a, x.clone()), (ONE - a, x.clone())]);
    assert!(th.theta.dist(&CMat::outer(&x, &x)) <= 1e-14);
    assert!(th.decomposition.unwrap().alpha_0.norm() <= 1e-15);
}

#[test]
fn theta_must_be_symmetric() {
    let mut m = CMat::zeros(8, 8);
    m[(0, 1)] = ONE;
    assert!(ControllingSpinor::from_matrix(m).is_err());
}

/// Reflection in a real direction orthogonal to the unit, as complex
/// base coordinates and the real orthogonal map it induces.
fn reflection_fixing_unit(rng: &mut ChaCha8Rng, h: &[Complex64]) -> (Vec<Complex64>, Vec<Vec<f64>>) {
    let mut r: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
    r[7] = 0.0;
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r: Vec<f64> = r.iter().map(|x| x / norm * 2f64.sqrt()).collect();
    let o = (0..8)
        .map(|i| (0..8).map(|j| r[i] * r[j] - if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    (r.iter().zip(h).map(|(x, hi)| hi * *x).collect(), o)
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..8).map(|i| (0..8).map(|j| (0..8).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

#[test]
fn lifted_rotations_give_isomorphic_tables() {
    let s = setup(8);
    let t = structural_constants(&s.ops, &s.theta, &s.h).unwrap();
    let x = s.theta.decomposition.as_ref().unwrap().parts[0].1.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let (r1, o1) = reflection_fixing_unit(&mut rng, &s.h.h);
        let (r2, o2) = reflection_fixing_unit(&mut rng, &s.h.h);
        let l1 = lift_reflection(&s.ops, &Reflection::new(&r1, &s.ops.g).unwrap()).unwrap();
        let l2 = lift_reflection(&s.ops, &Reflection::new(&r2, &s.ops.g).unwrap()).unwrap();
        let m = &l2.upper * &l1.lower.transpose();
        let x2 = m.mul_vec(&x);
        let moved = basis_algebra(&s.ops, &s.eps, &x2, &s.h).unwrap();

        // O = O2 O1 is an involution product, so O^{-1} = O1 O2
        let o = matmul(&o2, &o1);
        let oi = matmul(&o1, &o2);
        let mut worst: f64 = 0.0;
        for i in 0..8 {
            for j in 0..8 {
                for c in 0..8 {
                    let mut v = Complex64::new(0.0, 0.0);
                    for a in 0..8 {
                        for b in 0..8 {
                            for k in 0..8 {
                                v += t.constant(a, b, k) * (o[i][a] * o[j][b] * oi[k][c]);
                            }
                        }
                    }
                    worst = worst.max((moved.constant(i, j, c) - v).norm());
                }
            }
        }
        assert!(worst <= 1e-10, "{worst}");
        let opts = CheckOptions::default();
        assert_eq!(check_alternative(&moved, &opts).verdict, check_alternative(&t, &opts).verdict);
    }
}

#[test]
fn sixteen_has_identity_and_real_constants() {
    let s = setup(16);
    let t = structural_constants(&s.ops, &s.theta, &s.h).unwrap();
    assert!(t.max_imag() <= 1e-9);
    let e = t.identity().unwrap();
    for j in 0..16 {
        let ej = AlgebraElement::basis(16, j);
        assert!(multiply(&t, e, &ej).unwrap().sub(&ej).max_abs() <= 1e-10);
    }
}
