//! Algebras synthesised from connecting operators and a controlling
//! symmetric spin-tensor `theta^{CD}`:
//!
//! ```text
//! c_{ab}^f = sqrt(2) / g_f * sum_{C,D} (L_b U_a L_f^T)[C,D] theta[C,D]
//! ```
//!
//! followed by a pull-back to an orthonormal real basis and one global
//! rescale that turns the located identity into an exact unit.

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::clifford::{ConnectingOperators, SpinMetric};
use crate::error::{Error, Result};
use crate::numerics::{least_squares, CMat, ONE, ZERO};
use crate::table::{AlgebraElement, Constants, Provenance, StructureTable};

/// Imaginary residue above which a forged table is flagged complex.
pub const REAL_TOL: f64 = 1e-9;

/// `theta^{CD}`, optionally with the decomposition it was built from.
#[derive(Debug, Clone)]
pub struct ControllingSpinor {
    pub theta: CMat,
    pub decomposition: Option<Decomposition>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub parts: Vec<(Complex64, Vec<Complex64>)>,
    /// Coefficient of the `(2/N) eps^{CD}` term, `1 - sum alpha`.
    pub alpha_0: Complex64,
}

impl ControllingSpinor {
    /// Wraps an explicit matrix; it must be symmetric.
    pub fn from_matrix(theta: CMat) -> Result<Self> {
        if !theta.is_square() {
            return Err(Error::Shape("theta must be square".into()));
        }
        let asym = theta.dist(&theta.transpose());
        if asym > 1e-12 * theta.max_abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "theta is not symmetric (|theta - theta^T| = {asym:.3e})"
            )));
        }
        Ok(Self {
            theta,
            decomposition: None,
        })
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            theta: self.theta.scale(s),
            decomposition: None,
        }
    }
}

/// Diagonal inclusion `h_i`, with `h_i^2 g_ii = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionMap {
    pub h: Vec<Complex64>,
}

pub fn inclusion_operator(g: &[f64]) -> Result<InclusionMap> {
    let h = g
        .iter()
        .enumerate()
        .map(|(index, &gi)| {
            if gi == 0.0 {
                Err(Error::DegenerateMetric { index })
            } else {
                Ok(Complex64::new(gi, 0.0).sqrt().inv())
            }
        })
        .collect::<Result<_>>()?;
    Ok(InclusionMap { h })
}

/// The spinor with `X^1 = X^{N/2+1} = 1` (one-based), rescaled so that
/// `X^A X_A = 2`; `theta = X X^T`.
pub fn octonion_spinor(ops: &ConnectingOperators, eps: &SpinMetric) -> Result<ControllingSpinor> {
    if ops.n % 8 != 0 {
        return Err(Error::Domain(format!(
            "the octonion spinor needs n = 0 mod 8, got {}",
            ops.n
        )));
    }
    let big_n = ops.spinor_dim();
    let mut x = vec![ZERO; big_n];
    x[0] = ONE;
    x[big_n / 2] = ONE;
    let xx = eps.pair(&x, &x);
    if xx.norm() < 1e-12 {
        return Err(Error::DegenerateSpinor { value: xx.norm() });
    }
    let s = (Complex64::new(2.0, 0.0) / xx).sqrt();
    let x: Vec<Complex64> = x.iter().map(|v| v * s).collect();
    Ok(theta_from_decomposition(eps, &[(ONE, x)]))
}

/// `theta = sum alpha_I X_I X_I^T + (1 - sum alpha_I) (2/N) eps^{-1}`.
pub fn theta_from_decomposition(
    eps: &SpinMetric,
    parts: &[(Complex64, Vec<Complex64>)],
) -> ControllingSpinor {
    let big_n = eps.eps.rows();
    let alpha_sum: Complex64 = parts.iter().map(|p| p.0).sum();
    let alpha_0 = ONE - alpha_sum;
    let mut theta = eps.eps_inv.scale(alpha_0 * (2.0 / big_n as f64));
    for (alpha, x) in parts {
        theta = &theta + &CMat::outer(x, x).scale(*alpha);
    }
    // exact symmetry regardless of eps_inv rounding
    let theta = (&theta + &theta.transpose()).scale(Complex64::new(0.5, 0.0));
    ControllingSpinor {
        theta,
        decomposition: Some(Decomposition {
            parts: parts.to_vec(),
            alpha_0,
        }),
    }
}

/// Constants in the base index frame, before pull-back.
fn raw_constants(ops: &ConnectingOperators, theta: &CMat) -> Vec<Complex64> {
    let n = ops.n;
    let big_n = ops.spinor_dim();
    let sqrt2 = std::f64::consts::SQRT_2;
    let theta_t = theta.transpose();
    // W_f = L_f^T theta^T, so sum_{C,D} (L_b U_a L_f^T)[C,D] theta[C,D]
    // = sum_{C,A} V[C,A] W_f[A,C] with V = L_b U_a.
    let w: Vec<CMat> = ops.lower.iter().map(|l| &l.transpose() * &theta_t).collect();
    let blocks: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut out = vec![ZERO; n * n];
            for b in 0..n {
                let v = &ops.lower[b] * &ops.upper[a];
                for f in 0..n {
                    let wf = &w[f];
                    let mut s = ZERO;
                    for c in 0..big_n {
                        let vrow = v.row(c);
                        for (aa, &vv) in vrow.iter().enumerate() {
                            if vv != ZERO {
                                s += vv * wf[(aa, c)];
                            }
                        }
                    }
                    out[b * n + f] = s * (sqrt2 / ops.g[f]);
                }
            }
            out
        })
        .collect();
    blocks.concat()
}

fn pull_back(raw: &[Complex64], h: &InclusionMap) -> Vec<Complex64> {
    let n = h.h.len();
    let mut out = raw.to_vec();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[(i * n + j) * n + k] *= h.h[i] * h.h[j] / h.h[k];
            }
        }
    }
    out
}

/// Forged table for a given `theta`. The identity is located, the table
/// is rescaled by `lambda` so that the identity has unit norm and a
/// positive leading coordinate, and both are recorded.
pub fn structural_constants(
    ops: &ConnectingOperators,
    theta: &ControllingSpinor,
    h: &InclusionMap,
) -> Result<StructureTable> {
    let n = ops.n;
    if theta.theta.rows() != ops.spinor_dim() || !theta.theta.is_square() {
        return Err(Error::DimensionMismatch {
            expected: ops.spinor_dim(),
            got: theta.theta.rows(),
        });
    }
    if h.h.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.h.len(),
        });
    }
    let c = pull_back(&raw_constants(ops, &theta.theta), h);
    let metric: Vec<f64> = ops
        .g
        .iter()
        .zip(&h.h)
        .map(|(g, hi)| (hi * hi * *g).re)
        .collect();
    let provenance = Provenance::new("forge", json!({ "n": n }));
    let mut raw = StructureTable::new(n, Constants::Complex(c.clone()), metric.clone(), provenance)?;
    let (e, _) = find_identity(&mut raw)?;

    let p = (0..n)
        .max_by(|&a, &b| e.coords[a].norm().total_cmp(&e.coords[b].norm()))
        .expect("n > 0");
    let ee = raw.metric_form(&e.coords, &e.coords);
    let lambda = e.coords[p] / e.coords[p].norm() * ee.norm().sqrt();

    let scaled: Vec<Complex64> = c.iter().map(|v| v * lambda).collect();
    let max_imag = scaled.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let provenance = Provenance::new(
        "forge",
        json!({
            "n": n,
            "lambda": [lambda.re, lambda.im],
            "max_imag": max_imag,
            "complex": max_imag > REAL_TOL,
        }),
    );
    let mut t = StructureTable::new(n, Constants::Complex(scaled), metric, provenance)?
        .with_identity(e.scale(lambda.inv()));
    t.lambda = Some(lambda);
    Ok(t)
}

/// Table of the `I`-th basis algebra,
/// `theta = X X^T + (1 - X.X/2)(2/N) eps^{-1}`.
pub fn basis_algebra(
    ops: &ConnectingOperators,
    eps: &SpinMetric,
    x: &[Complex64],
    h: &InclusionMap,
) -> Result<StructureTable> {
    if ops.n % 8 != 0 {
        return Err(Error::Domain(format!("basis algebras need n = 0 mod 8, got {}", ops.n)));
    }
    if x.len() != ops.spinor_dim() {
        return Err(Error::DimensionMismatch {
            expected: ops.spinor_dim(),
            got: x.len(),
        });
    }
    let half_xx = eps.pair(x, x) * 0.5;
    let big_n = ops.spinor_dim() as f64;
    let theta = &CMat::outer(x, x) + &eps.eps_inv.scale((ONE - half_xx) * (2.0 / big_n));
    let theta = (&theta + &theta.transpose()).scale(Complex64::new(0.5, 0.0));
    structural_constants(ops, &ControllingSpinor::from_matrix(theta)?, h)
}

/// Least-squares solve of `e e_j = e_j = e_j e` for all `j`. On success the
/// element is cached in the table and returned with its residual.
pub fn find_identity(t: &mut StructureTable) -> Result<(AlgebraElement, f64)> {
    let n = t.dim();
    let a = CMat::from_fn(2 * n * n, n, |row, i| {
        let (side, jk) = (row / (n * n), row % (n * n));
        let (j, k) = (jk / n, jk % n);
        if side == 0 {
            t.constant(i, j, k)
        } else {
            t.constant(j, i, k)
        }
    });
    let b: Vec<Complex64> = (0..2 * n * n)
        .map(|row| {
            let jk = row % (n * n);
            if jk / n == jk % n {
                ONE
            } else {
                ZERO
            }
        })
        .collect();
    let (e, residual) = least_squares(&a, &b)?;
    let threshold = 1e-8 * t.max_abs().max(1.0);
    if residual > threshold || !residual.is_finite() {
        return Err(Error::NoIdentity {
            residual,
            threshold,
            candidate: e,
        });
    }
    let e = AlgebraElement::new(e);
    t.set_identity(e.clone());
    Ok((e, residual))
}

/// Octonion table forged at `n = 8` (or the octonion-pattern table at 16).
pub fn forge_octonion_pattern(n: usize) -> Result<StructureTable> {
    let ops = crate::clifford::build(n)?;
    let eps = crate::clifford::compute_spin_metric(&ops)?;
    let theta = octonion_spinor(&ops, &eps)?;
    let h = inclusion_operator(&ops.g)?;
    structural_constants(&ops, &theta, &h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build, compute_spin_metric};

    #[test]
    fn inclusion_examples() {
        assert_eq!(inclusion_operator(&[1.0, 1.0]).unwrap().h, vec![ONE, ONE]);
        let h = inclusion_operator(&[-1.0]).unwrap().h[0];
        assert!((h - Complex64::new(0.0, 1.0)).norm() < 1e-15 || (h + Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((h * h * -1.0 - ONE).norm() < 1e-15);
        let h = inclusion_operator(&[0.5]).unwrap().h[0];
        assert!((h - Complex64::new(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(matches!(
            inclusion_operator(&[1.0, 0.0]),
            Err(Error::DegenerateMetric { index: 1 })
        ));
    }

    #[test]
    fn octonion_spinor_support() {
        let ops = build(8).unwrap();
        let eps = compute_spin_metric(&ops).unwrap();
        let th = octonion_spinor(&ops, &eps).unwrap();
        let d = th.decomposition.as_ref().unwrap();
        let x = &d.parts[0].1;
        let support: Vec<usize> = (0..8).filter(|&i| x[i] != ZERO).collect();
        assert_eq!(support, vec![0, 4]);
        assert!((eps.pair(x, x) - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(d.alpha_0.norm() < 1e-15);
        assert_eq!(crate::numerics::rank(&th.theta, Default::default()).unwrap(), 1);
    }

    #[test]
    fn octonion_spinor_needs_n_mod_8() {
        let ops8 = build(8).unwrap();
        let eps = compute_spin_metric(&ops8).unwrap();
        let ops6 = build(6).unwrap();
        assert!(matches!(octonion_spinor(&ops6, &eps), Err(Error::Domain(_))));
    }

    #[test]
    fn decomposition_examples() {
        let ops = build(8).unwrap();
        let eps = compute_spin_metric(&ops).unwrap();
        let oct = octonion_spinor(&ops, &eps).unwrap();
        let x = oct.decomposition.unwrap().parts[0].1.clone();
        let th = theta_from_decomposition(&eps, &[(ONE, x)]);
        assert!(th.theta.dist(&oct.theta) < 1e-15);
        let th0 = theta_from_decomposition(&eps, &[]);
        assert!(th0.theta.dist(&eps.eps_inv.scale(Complex64::new(0.25, 0.0))) < 1e-15);
    }

    #[test]
    fn forged_octonions_have_unit() {
        let t = forge_octonion_pattern(8).unwrap();
        let e = t.identity().unwrap();
        assert!(t.max_imag() <= REAL_TOL);
        assert!((t.lambda.unwrap() - ONE).norm() < 1e-12);
        for j in 0..8 {
            let ej = AlgebraElement::basis(8, j);
            let l = crate::table::multiply(&t, e, &ej).unwrap();
            let r = crate::table::multiply(&t, &ej, e).unwrap();
            assert!(l.sub(&ej).max_abs() < 1e-10);
            assert!(r.sub(&ej).max_abs() < 1e-10);
        }
    }

    #[test]
    fn zero_table_has_no_identity() {
        let mut t = StructureTable::from_fn(3, vec![1.0; 3], Provenance::new("t", json!(null)), |_, _, _| ZERO).unwrap();
        assert!(matches!(find_identity(&mut t), Err(Error::NoIdentity { .. })));
    }

    #[test]
    fn cayley_dickson_identity_is_e0() {
        let mut t = crate::cayley_dickson::octonions();
        let (e, r) = find_identity(&mut t).unwrap();
        assert!(r < 1e-12);
        assert!(e.sub(&AlgebraElement::basis(8, 0)).max_abs() < 1e-12);
    }

    #[test]
    fn rescaled_theta_gives_same_table() {
        let ops = build(8).unwrap();
        let eps = compute_spin_metric(&ops).unwrap();
        let h = inclusion_operator(&ops.g).unwrap();
        let th = octonion_spinor(&ops, &eps).unwrap();
        let base = structural_constants(&ops, &th, &h).unwrap();
        for s in [2.0, -3.0] {
            let t = structural_constants(&ops, &th.scaled(Complex64::new(s, 0.0)), &h).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    for k in 0..8 {
                        worst = worst.max((t.constant(i, j, k) - base.constant(i, j, k)).norm());
                    }
                }
            }
            assert!(worst < 1e-12, "s = {s}: {worst}");
        }
    }
}
