//! Orthogonal symmetries in the spinor picture: reflection lifts, the
//! induced infinitesimal action, derivation and stabilizer dimensions,
//! and the eigenvalue classification of `theta`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{ConnectingOperators, SpinMetric};
use crate::error::{Error, Result};
use crate::numerics::{eigenvalues, rank, CMat, Tolerance, ZERO};
use crate::table::StructureTable;

/// `|g(r,r)|` below this is treated as isotropic.
pub const ISOTROPY_TOL: f64 = 1e-8;
/// Relative cutoff for significant eigenvalues and grouping tolerance.
pub const EIGEN_TOL: f64 = 1e-8;

pub fn so_dimension(n: usize) -> usize {
    n * (n - 1) / 2
}

/// A non-isotropic base vector `r^a`, normalised to `g(r,r) = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    pub r: Vec<Complex64>,
}

impl Reflection {
    pub fn new(r: &[Complex64], g: &[f64]) -> Result<Self> {
        if r.len() != g.len() {
            return Err(Error::DimensionMismatch {
                expected: g.len(),
                got: r.len(),
            });
        }
        let rr: Complex64 = r.iter().zip(g).map(|(x, gi)| x * x * *gi).sum();
        if rr.norm() < ISOTROPY_TOL {
            return Err(Error::DegenerateReflection { value: rr.norm() });
        }
        let s = (Complex64::new(2.0, 0.0) / rr).sqrt();
        Ok(Self {
            r: r.iter().map(|x| x * s).collect(),
        })
    }

    /// Base map `S[a][b] = r_a r^b - delta_ab`, acting on upper-index vectors
    /// as `v -> S^T v`.
    pub fn base_matrix(&self, g: &[f64]) -> CMat {
        let n = self.r.len();
        CMat::from_fn(n, n, |a, b| {
            let d = if a == b { 1.0 } else { 0.0 };
            self.r[a] * g[a] * self.r[b] - d
        })
    }
}

/// Spinor factors `R = sum r^k U_k` and `R_L = sum r^k L_k` of a reflection.
#[derive(Debug, Clone)]
pub struct ReflectionLift {
    pub upper: CMat,
    pub lower: CMat,
    /// Worst of `|sum_b S[a][b] U_b - R L_a^T R|` over `a`, `|R_L^T R - 1|`
    /// and `|R R_L^T - 1|`.
    pub residual: f64,
}

pub fn lift_reflection(ops: &ConnectingOperators, r: &Reflection) -> Result<ReflectionLift> {
    if r.r.len() != ops.n {
        return Err(Error::DimensionMismatch {
            expected: ops.n,
            got: r.r.len(),
        });
    }
    let upper = ops.contract_upper(&r.r);
    let lower = ops.contract_lower(&r.r);
    let s = r.base_matrix(&ops.g);
    let mut residual: f64 = 0.0;
    for a in 0..ops.n {
        let mut lhs = CMat::zeros(upper.rows(), upper.cols());
        for b in 0..ops.n {
            if s[(a, b)] != ZERO {
                lhs = &lhs + &ops.upper[b].scale(s[(a, b)]);
            }
        }
        let rhs = &(&upper * &ops.lower[a].transpose()) * &upper;
        residual = residual.max(lhs.dist(&rhs));
    }
    let id = CMat::identity(upper.rows());
    residual = residual
        .max((&lower.transpose() * &upper).dist(&id))
        .max((&upper * &lower.transpose()).dist(&id));
    Ok(ReflectionLift {
        upper,
        lower,
        residual,
    })
}

/// Antisymmetric `T^{ab}` with both indices raised.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinitesimalRotation {
    pub t: CMat,
}

impl InfinitesimalRotation {
    pub fn new(t: CMat) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::Shape("rotation generator must be square".into()));
        }
        let asym = (&t + &t.transpose()).max_abs();
        if asym > 1e-12 * t.max_abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "rotation generator is not antisymmetric (|T + T^T| = {asym:.3e})"
            )));
        }
        Ok(Self { t })
    }

    /// `E_ab - E_ba` for `a < b`, in lexicographic order.
    pub fn basis(n: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(so_dimension(n));
        for a in 0..n {
            for b in a + 1..n {
                let mut t = CMat::zeros(n, n);
                t[(a, b)] = Complex64::new(1.0, 0.0);
                t[(b, a)] = Complex64::new(-1.0, 0.0);
                out.push(Self { t });
            }
        }
        out
    }
}

/// `T_hat = 1/2 sum T^{ab} U_b L_a^T`.
pub fn induced_infinitesimal(ops: &ConnectingOperators, t: &InfinitesimalRotation) -> CMat {
    let big_n = ops.spinor_dim();
    let mut out = CMat::zeros(big_n, big_n);
    for a in 0..ops.n {
        for b in 0..ops.n {
            let c = t.t[(a, b)];
            if c != ZERO {
                out = &out + &(&ops.upper[b] * &ops.lower[a].transpose()).scale(c * 0.5);
            }
        }
    }
    out
}

/// Base bracket `T2 g T1 - T1 g T2`, the sign under which
/// `T -> T_hat` is a Lie homomorphism.
pub fn base_bracket(t1: &InfinitesimalRotation, t2: &InfinitesimalRotation, g: &[f64]) -> InfinitesimalRotation {
    let gm = CMat::diag(&g.iter().map(|x| Complex64::new(*x, 0.0)).collect::<Vec<_>>());
    let t = &(&(&t2.t * &gm) * &t1.t) - &(&(&t1.t * &gm) * &t2.t);
    InfinitesimalRotation { t }
}

/// `|[T1_hat, T2_hat] - hat(base_bracket(T1, T2))|`.
pub fn homomorphism_residual(
    ops: &ConnectingOperators,
    t1: &InfinitesimalRotation,
    t2: &InfinitesimalRotation,
) -> f64 {
    let h1 = induced_infinitesimal(ops, t1);
    let h2 = induced_infinitesimal(ops, t2);
    let comm = &(&h1 * &h2) - &(&h2 * &h1);
    comm.dist(&induced_infinitesimal(ops, &base_bracket(t1, t2, &ops.g)))
}

/// Dimension of the derivation algebra `D(e_i e_j) = D(e_i) e_j + e_i D(e_j)`.
/// Real tables are solved over the reals, complex ones over the complex field.
pub fn derivation_dimension(t: &StructureTable) -> Result<usize> {
    derivation_dimension_with(t, Tolerance::default())
}

pub fn derivation_dimension_with(t: &StructureTable, tol: Tolerance) -> Result<usize> {
    let n = t.dim();
    // unknown D[m][k] at column m*n + k, with D e_k = sum_m D[m][k] e_m
    let mut m = CMat::zeros(n * n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for out in 0..n {
                let row = (i * n + j) * n + out;
                for &(k, c) in t.basis_product(i, j) {
                    m[(row, out * n + k)] += c;
                }
                for p in 0..n {
                    let c = t.constant(p, j, out);
                    if c != ZERO {
                        m[(row, p * n + i)] -= c;
                    }
                    let c = t.constant(i, p, out);
                    if c != ZERO {
                        m[(row, p * n + j)] -= c;
                    }
                }
            }
        }
    }
    if t.is_real(1e-12) {
        m = m.map(|z| Complex64::new(z.re, 0.0));
    }
    Ok(n * n - rank(&m, tol)?)
}

/// Which constraints [`stabilizer_dimension`] imposes.
#[derive(Debug, Clone)]
pub struct StabilizerOptions {
    /// Identity direction in base (complex) coordinates: `T g e = 0`.
    pub fix_direction: Option<Vec<Complex64>>,
    /// `T_hat theta + theta T_hat^T = 0`.
    pub fix_theta: Option<CMat>,
    pub tolerance: Tolerance,
}

impl Default for StabilizerOptions {
    fn default() -> Self {
        Self {
            fix_direction: None,
            fix_theta: None,
            tolerance: Tolerance::default(),
        }
    }
}

/// Dimension of the subalgebra of `so(n)` meeting the selected constraints.
pub fn stabilizer_dimension(ops: &ConnectingOperators, opts: &StabilizerOptions) -> Result<usize> {
    let n = ops.n;
    let basis = InfinitesimalRotation::basis(n);
    let big_n = ops.spinor_dim();
    let mut rows = 0;
    if opts.fix_direction.is_some() {
        rows += n;
    }
    if opts.fix_theta.is_some() {
        rows += big_n * big_n;
    }
    if rows == 0 {
        return Ok(basis.len());
    }
    let mut m = CMat::zeros(rows, basis.len());
    for (col, t) in basis.iter().enumerate() {
        let mut row = 0;
        if let Some(e) = &opts.fix_direction {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            let ge: Vec<Complex64> = e.iter().zip(&ops.g).map(|(x, g)| x * *g).collect();
            for (k, v) in t.t.mul_vec(&ge).into_iter().enumerate() {
                m[(row + k, col)] = v;
            }
            row += n;
        }
        if let Some(theta) = &opts.fix_theta {
            if theta.rows() != big_n || !theta.is_square() {
                return Err(Error::DimensionMismatch {
                    expected: big_n,
                    got: theta.rows(),
                });
            }
            let h = induced_infinitesimal(ops, t);
            let ht = &h * theta;
            let v = &ht + &ht.transpose();
            for (k, &z) in v.data().iter().enumerate() {
                m[(row + k, col)] = z;
            }
        }
    }
    Ok(basis.len() - rank(&m, opts.tolerance)?)
}

/// Spectrum of the mixed tensor `theta^{CB} eps_{BD}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaClass {
    /// Sorted by decreasing real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Count with `|lambda| > 1e-8 max|lambda|`.
    pub significant: usize,
    /// Distinct eigenvalues with multiplicities.
    pub groups: Vec<(Complex64, usize)>,
    pub label: String,
}

pub fn classify_theta(eps: &SpinMetric, theta: &CMat) -> Result<ThetaClass> {
    if theta.rows() != eps.eps.rows() || !theta.is_square() {
        return Err(Error::DimensionMismatch {
            expected: eps.eps.rows(),
            got: theta.rows(),
        });
    }
    let mut ev = eigenvalues(&(theta * &eps.eps))?;
    ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let top = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let significant = ev.iter().filter(|z| z.norm() > EIGEN_TOL * top).count();
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for &z in &ev {
        match groups.iter_mut().find(|(c, _)| (c - z).norm() <= EIGEN_TOL.max(EIGEN_TOL * top)) {
            Some(g) => g.1 += 1,
            None => groups.push((z, 1)),
        }
    }
    let label = groups
        .iter()
        .map(|(z, k)| {
            let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
            let (re, im) = (clean(z.re), clean(z.im));
            if im == 0.0 {
                format!("{re:.6}^{k}")
            } else {
                format!("({re:.6}{im:+.6}i)^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ");
    Ok(ThetaClass {
        eigenvalues: ev,
        significant,
        groups,
        label,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub so_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilizer_dim: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub theta_eigenvalues: Vec<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_label: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley_dickson::{complex, octonions, quaternions};
    use crate::clifford::build;
    use crate::numerics::ONE;

    #[test]
    fn so_dimensions() {
        assert_eq!(so_dimension(8), 28);
        assert_eq!(so_dimension(2), 1);
    }

    #[test]
    fn isotropic_reflection_rejected() {
        let g = [1.0, 1.0];
        let r = [ONE, Complex64::new(0.0, 1.0)];
        assert!(matches!(Reflection::new(&r, &g), Err(Error::DegenerateReflection { .. })));
    }

    #[test]
    fn first_axis_reflection() {
        let ops = build(8).unwrap();
        let mut r = vec![ZERO; 8];
        r[0] = ONE;
        let lift = lift_reflection(&ops, &Reflection::new(&r, &ops.g).unwrap()).unwrap();
        assert!(lift.residual <= 1e-12, "{}", lift.residual);
    }

    #[test]
    fn zero_generator_lifts_to_zero() {
        let ops = build(8).unwrap();
        let t = InfinitesimalRotation::new(CMat::zeros(8, 8)).unwrap();
        assert_eq!(induced_infinitesimal(&ops, &t).max_abs(), 0.0);
    }

    #[test]
    fn rejects_symmetric_generator() {
        assert!(InfinitesimalRotation::new(CMat::identity(3)).is_err());
    }

    #[test]
    fn basis_brackets_are_homomorphic() {
        let ops = build(8).unwrap();
        let basis = InfinitesimalRotation::basis(8);
        for t1 in basis.iter().step_by(5) {
            for t2 in basis.iter().step_by(3) {
                assert!(homomorphism_residual(&ops, t1, t2) <= 1e-12);
            }
        }
    }

    #[test]
    fn derivation_dimensions_of_small_algebras() {
        assert_eq!(derivation_dimension(&complex()).unwrap(), 0);
        assert_eq!(derivation_dimension(&quaternions()).unwrap(), 3);
        assert_eq!(derivation_dimension(&octonions()).unwrap(), 14);
    }

    #[test]
    fn derivation_dimension_is_permutation_invariant() {
        let o = octonions();
        let p = o.permuted(&[3, 0, 7, 1, 6, 2, 5, 4]).unwrap();
        assert_eq!(derivation_dimension(&p).unwrap(), 14);
    }

    #[test]
    fn unconstrained_stabilizer_is_so_n() {
        let ops = build(8).unwrap();
        assert_eq!(stabilizer_dimension(&ops, &StabilizerOptions::default()).unwrap(), 28);
    }
}
