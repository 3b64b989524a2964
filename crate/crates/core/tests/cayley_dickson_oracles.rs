use hypercomplex::cayley_dickson::{algebra, octonions, quaternions, sedenions};
use hypercomplex::table::{conjugate, inner, multiply, AlgebraElement};
use num_complex::Complex64;
use proptest::prelude::*;

fn e(n: usize, i: usize) -> AlgebraElement {
    AlgebraElement::basis(n, i)
}

#[test]
fn quaternion_cycle() {
    let h = quaternions();
    for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        assert_eq!(multiply(&h, &e(4, a), &e(4, b)).unwrap(), e(4, c));
        assert_eq!(
            multiply(&h, &e(4, b), &e(4, a)).unwrap(),
            e(4, c).scale(Complex64::new(-1.0, 0.0))
        );
    }
}

#[test]
fn imaginary_units_square_to_minus_one() {
    for levels in 1..=5 {
        let t = algebra(levels).unwrap();
        let n = t.dim();
        for i in 1..n {
            assert_eq!(multiply(&t, &e(n, i), &e(n, i)).unwrap(), e(n, 0).scale(Complex64::new(-1.0, 0.0)));
        }
    }
}

#[test]
fn sedenion_has_fifteen_imaginary_units() {
    let s = sedenions();
    assert_eq!(s.dim(), 16);
    let imag = (0..16).filter(|&i| conjugate(&s, &e(16, i)).unwrap() == e(16, i).scale(Complex64::new(-1.0, 0.0))).count();
    assert_eq!(imag, 15);
}

fn elem(v: &[f64]) -> AlgebraElement {
    AlgebraElement::from_real(v)
}

proptest! {
    #[test]
    fn octonion_norm_is_multiplicative(a in prop::collection::vec(-2.0f64..2.0, 8), b in prop::collection::vec(-2.0f64..2.0, 8)) {
        let o = octonions();
        let (x, y) = (elem(&a), elem(&b));
        let xy = multiply(&o, &x, &y).unwrap();
        let lhs = inner(&o, &xy, &xy).unwrap();
        let rhs = inner(&o, &x, &x).unwrap() * inner(&o, &y, &y).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
    }

    #[test]
    fn conjugation_reverses_products(a in prop::collection::vec(-2.0f64..2.0, 16), b in prop::collection::vec(-2.0f64..2.0, 16)) {
        let s = sedenions();
        let (x, y) = (elem(&a), elem(&b));
        let lhs = conjugate(&s, &multiply(&s, &x, &y).unwrap()).unwrap();
        let rhs = multiply(&s, &conjugate(&s, &y).unwrap(), &conjugate(&s, &x).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12);
    }
}
