//! Cayley–Dickson doubling.
//!
//! An element of the doubled algebra is written `a + b i` with `a, b` in
//! the old algebra and `i` the new imaginary unit, stored as the old
//! coordinates of `a` followed by those of `b`. Products expand as
//! `ac + a(di) + (bi)c + (bi)(di)` with
//!
//! * `a(di) = (da) i`
//! * `(bi)c = (b cbar) i`
//! * `(bi)(di) = -dbar b`
//! * `conj(a + b i) = abar - b i`
//!
//! so the level-`k` basis index reads as a bit string of which units were
//! adjoined.

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::table::{conjugate, AlgebraElement, Constants, Provenance, StructureTable};

/// Largest supported number of doublings (dimension 32).
pub const MAX_LEVELS: usize = 5;

/// The real numbers as a one-dimensional table.
pub fn real() -> StructureTable {
    StructureTable::new(
        1,
        Constants::Exact(vec![1]),
        vec![1.0],
        Provenance::new("cayley-dickson", json!({ "levels": 0 })),
    )
    .expect("valid 1-d table")
    .with_identity(AlgebraElement::basis(1, 0))
}

/// One doubling step. The input must carry an identity element, which
/// defines its conjugation.
pub fn double(a: &StructureTable) -> Result<StructureTable> {
    let e = a
        .identity()
        .ok_or_else(|| Error::InvalidInput("doubling needs a table with an identity".into()))?
        .clone();
    let m = a.dim();
    let n = 2 * m;
    // conj(e_r) as coordinates
    let conj: Vec<Vec<Complex64>> = (0..m)
        .map(|r| conjugate(a, &AlgebraElement::basis(m, r)).map(|x| x.coords))
        .collect::<Result<_>>()?;

    let mut c = vec![Complex64::new(0.0, 0.0); n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for p in 0..m {
        for r in 0..m {
            // e_p e_r
            for &(k, v) in a.basis_product(p, r) {
                c[idx(p, r, k)] += v;
            }
            // e_p (e_r i) = (e_r e_p) i
            for &(k, v) in a.basis_product(r, p) {
                c[idx(p, m + r, m + k)] += v;
            }
            // (e_p i) e_r = (e_p conj(e_r)) i
            for (t, &w) in conj[r].iter().enumerate() {
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for &(k, v) in a.basis_product(p, t) {
                    c[idx(m + p, r, m + k)] += w * v;
                }
            }
            // (e_p i)(e_r i) = -conj(e_r) e_p
            for (t, &w) in conj[r].iter().enumerate() {
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for &(k, v) in a.basis_product(t, p) {
                    c[idx(m + p, m + r, k)] -= w * v;
                }
            }
        }
    }
    let levels = a
        .provenance()
        .params
        .get("levels")
        .and_then(|l| l.as_u64())
        .map(|l| l + 1);
    let metric = a.metric().iter().chain(a.metric()).copied().collect();
    let mut unit = e.coords.clone();
    unit.resize(n, Complex64::new(0.0, 0.0));
    Ok(StructureTable::new(
        n,
        Constants::Complex(c),
        metric,
        Provenance::new("cayley-dickson", json!({ "levels": levels })),
    )?
    .with_identity(AlgebraElement::new(unit)))
}

/// The algebra of dimension `2^levels`: R, C, H, O, S, then the 32-ions.
pub fn algebra(levels: usize) -> Result<StructureTable> {
    if levels > MAX_LEVELS {
        return Err(Error::Domain(format!(
            "levels must be in 0..={MAX_LEVELS}, got {levels}"
        )));
    }
    (0..levels).try_fold(real(), |t, _| double(&t))
}

pub fn complex() -> StructureTable {
    algebra(1).expect("level 1")
}

pub fn quaternions() -> StructureTable {
    algebra(2).expect("level 2")
}

pub fn octonions() -> StructureTable {
    algebra(3).expect("level 3")
}

pub fn sedenions() -> StructureTable {
    algebra(4).expect("level 4")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::multiply;

    fn e(n: usize, i: usize) -> AlgebraElement {
        AlgebraElement::basis(n, i)
    }

    fn prod(t: &StructureTable, i: usize, j: usize) -> AlgebraElement {
        multiply(t, &e(t.dim(), i), &e(t.dim(), j)).unwrap()
    }

    #[test]
    fn complex_unit_squares_to_minus_one() {
        let c = complex();
        assert_eq!(prod(&c, 1, 1), e(2, 0).scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn hamilton_relations() {
        let h = quaternions();
        // i = e1, j = e2, k = e3
        assert_eq!(prod(&h, 1, 2), e(4, 3));
        assert_eq!(prod(&h, 2, 3), e(4, 1));
        assert_eq!(prod(&h, 3, 1), e(4, 2));
        assert_ne!(prod(&h, 1, 2), prod(&h, 2, 1));
    }

    #[test]
    fn octonions_are_not_associative() {
        let o = octonions();
        let (e1, e2, e4) = (e(8, 1), e(8, 2), e(8, 4));
        let left = multiply(&o, &multiply(&o, &e1, &e2).unwrap(), &e4).unwrap();
        let right = multiply(&o, &e1, &multiply(&o, &e2, &e4).unwrap()).unwrap();
        assert_ne!(left, right);
    }

    #[test]
    fn constants_are_signed_units() {
        for levels in 0..=MAX_LEVELS {
            let t = algebra(levels).unwrap();
            assert!(t.is_exact(), "level {levels} lost exactness");
            let n = t.dim();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(t.basis_product(i, j).len(), 1);
                }
            }
        }
    }

    #[test]
    fn two_sided_unit_at_every_level() {
        for levels in 0..=MAX_LEVELS {
            let t = algebra(levels).unwrap();
            let n = t.dim();
            for i in 0..n {
                assert_eq!(prod(&t, 0, i), e(n, i));
                assert_eq!(prod(&t, i, 0), e(n, i));
            }
        }
    }

    #[test]
    fn levels_out_of_range() {
        assert!(matches!(algebra(6), Err(Error::Domain(_))));
    }

    #[test]
    fn doubling_requires_identity() {
        let t = StructureTable::from_fn(
            1,
            vec![1.0],
            Provenance::new("t", serde_json::Value::Null),
            |_, _, _| Complex64::new(1.0, 0.0),
        )
        .unwrap();
        assert!(matches!(double(&t), Err(Error::InvalidInput(_))));
    }
}
