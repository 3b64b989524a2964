//! Connecting operators of the complex Clifford algebra in reduced form.
//!
//! For even `n` the generators are `gamma = [[0, sigma], [eta, 0]]` with
//! `N x N` blocks, `N = 2^(n/2 - 1)`. We store `upper[k] = eta_k^{AB}` and
//! `lower[k] = eta_k{}_{AB}` (so `sigma_k = lower[k]^T`); the reduced
//! Clifford equation reads
//!
//! ```text
//! upper[a] lower[b]^T + upper[b] lower[a]^T = g[a] delta_ab I
//! ```
//!
//! together with the mirrored relation `lower[a]^T upper[b] + ... = g I`
//! coming from the other diagonal block of `gamma_a gamma_b`.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{sparse_null_space, CMat, SparseSystem, Tolerance, I, ONE, ZERO};

/// Residual bound every constructed operator set must meet.
pub const CLIFFORD_TOL: f64 = 1e-10;
/// Bound for `eps upper eps = lower`.
pub const LOWERING_TOL: f64 = 1e-9;
pub const MAX_N: usize = 16;

/// One entry of the construction log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub step: String,
    pub n_from: usize,
    pub n_to: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub tried: Vec<(String, f64)>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub g_new: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ConnectingOperators {
    pub n: usize,
    pub upper: Vec<CMat>,
    pub lower: Vec<CMat>,
    /// Diagonal base metric, as measured from the Clifford products.
    pub g: Vec<f64>,
    pub log: Vec<LogEntry>,
}

impl ConnectingOperators {
    pub fn spinor_dim(&self) -> usize {
        self.upper[0].rows()
    }

    /// `max |U_a L_b^T + U_b L_a^T - g_ab I|` over all pairs, together with
    /// the mirrored relation.
    pub fn clifford_residual(&self) -> f64 {
        clifford_residual(&self.upper, &self.lower, &self.g)
    }

    /// Stacked `gamma_k = [[0, sigma_k], [eta_k, 0]]` of size `2N`.
    pub fn gamma(&self, k: usize) -> CMat {
        let n = self.spinor_dim();
        let z = CMat::zeros(n, n);
        let sigma = self.lower[k].transpose();
        CMat::block(&[&[&z, &sigma], &[&self.upper[k], &z]])
    }

    /// Raises an index with the stored diagonal metric.
    pub fn raise(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().zip(&self.g).map(|(x, g)| x / *g).collect()
    }

    /// Lowers an index with the stored diagonal metric.
    pub fn lower_index(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.iter().zip(&self.g).map(|(x, g)| x * *g).collect()
    }

    /// `sum_k v^k upper[k]`.
    pub fn contract_upper(&self, v: &[Complex64]) -> CMat {
        contract(&self.upper, v)
    }

    /// `sum_k v^k lower[k]`.
    pub fn contract_lower(&self, v: &[Complex64]) -> CMat {
        contract(&self.lower, v)
    }
}

fn contract(ops: &[CMat], v: &[Complex64]) -> CMat {
    let mut out = CMat::zeros(ops[0].rows(), ops[0].cols());
    for (m, &c) in ops.iter().zip(v) {
        if c != ZERO {
            out = &out + &m.scale(c);
        }
    }
    out
}

fn clifford_residual(upper: &[CMat], lower: &[CMat], g: &[f64]) -> f64 {
    let n = upper.len();
    let lt: Vec<CMat> = lower.iter().map(CMat::transpose).collect();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a..n {
            let target = if a == b { g[a] } else { 0.0 };
            let m1 = &(&upper[a] * &lt[b]) + &(&upper[b] * &lt[a]);
            let m2 = &(&lt[a] * &upper[b]) + &(&lt[b] * &upper[a]);
            for m in [m1, m2] {
                let size = m.rows();
                for i in 0..size {
                    for j in 0..size {
                        let want = if i == j { target } else { 0.0 };
                        worst = worst.max((m[(i, j)] - want).norm());
                    }
                }
            }
        }
    }
    worst
}

/// Measured `g_k = 2 tr(U_k L_k^T) / N`.
fn measure_g(upper: &CMat, lower: &CMat) -> f64 {
    let n = upper.rows() as f64;
    (upper.dot_entries(lower)).re * 2.0 / n
}

/// Seed of the induction: `n = 2`, `N = 1`.
pub fn build_base() -> ConnectingOperators {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let upper = vec![
        CMat::diag(&[Complex64::new(s, 0.0)]),
        CMat::diag(&[Complex64::new(0.0, s)]),
    ];
    let lower = vec![
        CMat::diag(&[Complex64::new(s, 0.0)]),
        CMat::diag(&[Complex64::new(0.0, -s)]),
    ];
    let g = vec![1.0, 1.0];
    let residual = clifford_residual(&upper, &lower, &g);
    ConnectingOperators {
        n: 2,
        upper,
        lower,
        g,
        log: vec![LogEntry {
            step: "base".into(),
            n_from: 0,
            n_to: 2,
            variant: None,
            residual,
            tried: vec![],
            g_new: vec![1.0, 1.0],
        }],
    }
}

/// Finite family of readings of the transition display.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionVariant {
    /// Read the `(eta^T)_alpha` blocks as the lowered operator itself
    /// rather than its transpose.
    pub transposed_reading: bool,
    /// Put `-i/2` rather than `+i/2` in the upper-right block.
    pub conjugate_i: bool,
    /// Attach the imaginary coefficient to the last new direction.
    pub swap_new: bool,
}

impl TransitionVariant {
    pub const VERBATIM: Self = Self {
        transposed_reading: false,
        conjugate_i: false,
        swap_new: false,
    };

    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(8);
        for transposed_reading in [false, true] {
            for conjugate_i in [false, true] {
                for swap_new in [false, true] {
                    out.push(Self {
                        transposed_reading,
                        conjugate_i,
                        swap_new,
                    });
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        format!(
            "{}{}{}",
            if self.transposed_reading { "T" } else { "t" },
            if self.conjugate_i { "-i" } else { "+i" },
            if self.swap_new { "/swapped" } else { "" }
        )
    }
}

/// Applies one reading of the transition display to `n`-dimensional
/// operators, producing candidate `(n+2)`-dimensional ones.
pub fn transition(ops: &ConnectingOperators, variant: TransitionVariant) -> (Vec<CMat>, Vec<CMat>) {
    let half = ops.spinor_dim();
    let z = CMat::zeros(half, half);
    let id = CMat::identity(half);
    let mut upper = Vec::with_capacity(ops.n + 2);
    let mut lower = Vec::with_capacity(ops.n + 2);
    for (u, l) in ops.upper.iter().zip(&ops.lower) {
        let lt = l.transpose();
        let (u_br, l_tl) = if variant.transposed_reading {
            (-l, lt.clone())
        } else {
            (-&lt, l.clone())
        };
        upper.push(CMat::block(&[&[u, &z], &[&z, &u_br]]));
        // sigma block: [[(eta^T)_alpha, 0], [0, -eta_alpha]]; lower = sigma^T
        let l_br = -&u.transpose();
        lower.push(CMat::block(&[&[&l_tl, &z], &[&z, &l_br]]));
    }
    let ihalf = if variant.conjugate_i { -I * 0.5 } else { I * 0.5 };
    let half_id = id.scale(Complex64::new(0.5, 0.0));
    let u_im = CMat::block(&[&[&z, &id.scale(ihalf)], &[&id.scale(-ihalf), &z]]);
    let u_re = CMat::block(&[&[&z, &half_id], &[&half_id, &z]]);
    // the sigma display repeats the same coefficients, so lower = upper^T
    let (first, second) = if variant.swap_new {
        (u_re, u_im)
    } else {
        (u_im, u_re)
    };
    lower.push(first.transpose());
    upper.push(first);
    lower.push(second.transpose());
    upper.push(second);
    (upper, lower)
}

/// Inductive step `n -> n + 2`. The first reading of the transition whose
/// output satisfies the Clifford equation is kept; the choice and the
/// measured metric of the two new directions go into the log.
pub fn extend(ops: &ConnectingOperators) -> Result<ConnectingOperators> {
    let mut tried = Vec::new();
    let mut best = f64::INFINITY;
    for variant in TransitionVariant::all() {
        let (upper, lower) = transition(ops, variant);
        let g: Vec<f64> = upper.iter().zip(&lower).map(|(u, l)| measure_g(u, l)).collect();
        let residual = clifford_residual(&upper, &lower, &g);
        tried.push((variant.label(), residual));
        best = best.min(residual);
        if residual <= CLIFFORD_TOL && g.iter().all(|x| x.abs() > 1e-12) {
            let mut log = ops.log.clone();
            log.push(LogEntry {
                step: "extend".into(),
                n_from: ops.n,
                n_to: ops.n + 2,
                variant: Some(variant.label()),
                residual,
                tried,
                g_new: g[ops.n..].to_vec(),
            });
            return Ok(ConnectingOperators {
                n: ops.n + 2,
                upper,
                lower,
                g,
                log,
            });
        }
    }
    Err(Error::Construction {
        n: ops.n + 2,
        residual: best,
    })
}

/// Re-bases the second spinor slot so that every operator becomes
/// antisymmetric: `U -> U T^T`, `L -> L T^{-1}` with `T` spanning the
/// one-dimensional solution space of `U_k T^T + T U_k^T = 0`.
///
/// Applied at `n = 6 (mod 8)` this makes the spin metric of the next
/// extension pair the two halves of spinor space, `eps = [[0, 1], [1, 0]]`.
pub fn align_chirality(ops: &ConnectingOperators) -> Result<ConnectingOperators> {
    let big_n = ops.spinor_dim();
    let mut sys = SparseSystem::new(big_n * big_n);
    for u in &ops.upper {
        let nz = nonzeros(u);
        for a in 0..big_n {
            for b in a..big_n {
                // (U T^T)[a,b] = sum_c U[a,c] T[b,c];  (T U^T)[a,b] = sum_c T[a,c] U[b,c]
                let row = nz.rows[a]
                    .iter()
                    .map(|&(c, v)| (b * big_n + c, v))
                    .chain(nz.rows[b].iter().map(|&(c, v)| (a * big_n + c, v)));
                sys.push_row(row);
            }
        }
    }
    let ns = sparse_null_space(&sys, Tolerance::default())?;
    if ns.len() != 1 {
        return Err(Error::Construction {
            n: ops.n,
            residual: ns.len() as f64,
        });
    }
    let t = CMat::from_vec(big_n, big_n, ns[0].clone())?;
    let t = t.scale(Complex64::new(1.0 / t.max_abs(), 0.0));
    let t_inv = t.inverse()?;
    let tt = t.transpose();
    let upper: Vec<CMat> = ops.upper.iter().map(|u| u * &tt).collect();
    let lower: Vec<CMat> = ops.lower.iter().map(|l| l * &t_inv).collect();
    let residual = clifford_residual(&upper, &lower, &ops.g);
    let antisym = upper
        .iter()
        .chain(&lower)
        .map(|m| (m + &m.transpose()).max_abs())
        .fold(0.0, f64::max);
    if residual > CLIFFORD_TOL || antisym > CLIFFORD_TOL {
        return Err(Error::Construction {
            n: ops.n,
            residual: residual.max(antisym),
        });
    }
    let mut log = ops.log.clone();
    log.push(LogEntry {
        step: "align".into(),
        n_from: ops.n,
        n_to: ops.n,
        variant: None,
        residual,
        tried: vec![],
        g_new: vec![],
    });
    Ok(ConnectingOperators {
        n: ops.n,
        upper,
        lower,
        g: ops.g.clone(),
        log,
    })
}

/// Operators for even `n` in `2..=16`.
pub fn build(n: usize) -> Result<ConnectingOperators> {
    if n % 2 != 0 || !(2..=MAX_N).contains(&n) {
        return Err(Error::Domain(format!(
            "n must be even and in 2..={MAX_N}, got {n}"
        )));
    }
    let mut ops = build_base();
    while ops.n < n {
        if ops.n % 8 == 6 {
            ops = align_chirality(&ops)?;
        }
        ops = extend(&ops)?;
    }
    Ok(ops)
}

/// `N = 2^(n/2 - 1)`.
pub fn spinor_dim(n: usize) -> usize {
    1 << (n / 2 - 1)
}

/// How the base dimension `n` compares with the spinor dimension `N`.
pub fn dimension_crossover(n: usize) -> Ordering {
    n.cmp(&spinor_dim(n))
}

struct Nonzeros {
    rows: Vec<Vec<(usize, Complex64)>>,
    cols: Vec<Vec<(usize, Complex64)>>,
}

fn nonzeros(m: &CMat) -> Nonzeros {
    let mut rows = vec![Vec::new(); m.rows()];
    let mut cols = vec![Vec::new(); m.cols()];
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m[(r, c)];
            if v != ZERO {
                rows[r].push((c, v));
                cols[c].push((r, v));
            }
        }
    }
    Nonzeros { rows, cols }
}

/// Symmetric spin metric `eps_{AB}` and its inverse `eps^{AB}`.
#[derive(Debug, Clone)]
pub struct SpinMetric {
    pub eps: CMat,
    pub eps_inv: CMat,
    /// Sign `s` of the intertwining relation that produced `eps`.
    pub sign: i8,
    /// `max_k |eps U_k eps - L_k|`.
    pub lowering_residual: f64,
}

impl SpinMetric {
    /// `X_A = eps_AB X^B`.
    pub fn lower(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.eps.mul_vec(x)
    }

    /// `X^A Y_A`.
    pub fn pair(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        x.iter().zip(self.lower(y)).map(|(a, b)| a * b).sum()
    }
}

/// Nullity of the intertwiner system for one sign choice, with its
/// `(P, Q)` solution when one-dimensional.
pub fn intertwiner_space(ops: &ConnectingOperators, sign: f64) -> Result<Vec<Vec<Complex64>>> {
    let big_n = ops.spinor_dim();
    let nn = big_n * big_n;
    // C = diag(P, Q) with C gamma_k = s gamma_k^T C:
    //   P L_k^T = s U_k^T Q,   Q U_k = s L_k P
    let p = |a: usize, b: usize| a * big_n + b;
    let q = |a: usize, b: usize| nn + a * big_n + b;
    let s = Complex64::new(sign, 0.0);
    let mut sys = SparseSystem::new(2 * nn);
    for (u, l) in ops.upper.iter().zip(&ops.lower) {
        let un = nonzeros(u);
        let ln = nonzeros(l);
        for a in 0..big_n {
            for b in 0..big_n {
                // (P L^T)[a,b] = sum_c P[a,c] L[b,c];  (U^T Q)[a,b] = sum_c U[c,a] Q[c,b]
                let row = ln.rows[b]
                    .iter()
                    .map(|&(c, v)| (p(a, c), v))
                    .chain(un.cols[a].iter().map(|&(c, v)| (q(c, b), -s * v)));
                sys.push_row(row);
                // (Q U)[a,b] = sum_c Q[a,c] U[c,b];  (L P)[a,b] = sum_c L[a,c] P[c,b]
                let row = un.cols[b]
                    .iter()
                    .map(|&(c, v)| (q(a, c), v))
                    .chain(ln.rows[a].iter().map(|&(c, v)| (p(c, b), -s * v)));
                sys.push_row(row);
            }
        }
    }
    sparse_null_space(&sys, Tolerance::default())
}

/// Spin metric for `n = 0 (mod 8)`.
///
/// `eps` is the `Q` block of the unique (up to scale) block-diagonal
/// intertwiner `C gamma_k = s gamma_k^T C`, symmetrised, scaled so that it
/// lowers `upper` onto `lower`, and signed so that the octonion spinor
/// `X = e_1 + e_{N/2+1}` has `X^A X_A = 2`.
pub fn compute_spin_metric(ops: &ConnectingOperators) -> Result<SpinMetric> {
    if ops.n % 8 != 0 {
        return Err(Error::Domain(format!(
            "a symmetric spin metric needs n = 0 mod 8, got {}",
            ops.n
        )));
    }
    let big_n = ops.spinor_dim();
    let nn = big_n * big_n;
    let mut dims = Vec::new();
    let mut chosen = None;
    for sign in [1.0, -1.0] {
        let ns = intertwiner_space(ops, sign)?;
        dims.push(ns.len());
        if ns.len() == 1 {
            chosen = Some((sign, ns.into_iter().next().expect("one vector")));
            break;
        }
    }
    let (sign, v) = chosen.ok_or(Error::AmbiguousSpinMetric { dims })?;
    let qm = CMat::from_vec(big_n, big_n, v[nn..].to_vec())?;
    let sym = (&qm + &qm.transpose()).scale(Complex64::new(0.5, 0.0));
    if sym.max_abs() <= 1e-8 * qm.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::WrongResidue { n: ops.n });
    }

    // scale: (k eps0) U (k eps0) = L
    let lowered = &(&sym * &ops.upper[0]) * &sym;
    let l0 = &ops.lower[0];
    let j = (0..nn)
        .max_by(|&a, &b| l0.data()[a].norm().total_cmp(&l0.data()[b].norm()))
        .expect("nonempty");
    let k2 = l0.data()[j] / lowered.data()[j];
    let mut eps = sym.scale(k2.sqrt());

    let mut x = vec![ZERO; big_n];
    x[0] = ONE;
    x[big_n / 2] = ONE;
    let xx: Complex64 = x.iter().zip(eps.mul_vec(&x)).map(|(a, b)| a * b).sum();
    if xx.re < 0.0 {
        eps = -&eps;
    }
    let eps_inv = eps.inverse()?;
    let lowering_residual = ops
        .upper
        .iter()
        .zip(&ops.lower)
        .map(|(u, l)| (&(&eps * u) * &eps).dist(l))
        .fold(0.0, f64::max);
    if lowering_residual > LOWERING_TOL {
        return Err(Error::Construction {
            n: ops.n,
            residual: lowering_residual,
        });
    }
    Ok(SpinMetric {
        eps,
        eps_inv,
        sign: sign as i8,
        lowering_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_products() {
        let b = build_base();
        let u = &b.upper;
        let l = &b.lower;
        assert!(((u[0][(0, 0)] * l[0][(0, 0)]) * 2.0 - ONE).norm() < 1e-15);
        assert!(((u[1][(0, 0)] * l[1][(0, 0)]) * 2.0 - ONE).norm() < 1e-15);
        assert!((u[0][(0, 0)] * l[1][(0, 0)] + u[1][(0, 0)] * l[0][(0, 0)]).norm() < 1e-15);
        assert!(b.clifford_residual() < 1e-15);
        assert_eq!(b.g, vec![1.0, 1.0]);
    }

    #[test]
    fn first_extension() {
        let ops = extend(&build_base()).unwrap();
        assert_eq!((ops.n, ops.spinor_dim()), (4, 2));
        assert!(ops.clifford_residual() <= 1e-14);
        let last = ops.log.last().unwrap();
        assert_eq!(last.variant.as_deref(), Some(TransitionVariant::VERBATIM.label().as_str()));
        assert_eq!(last.g_new, vec![0.5, 0.5]);
    }

    #[test]
    fn block_pattern_of_transition() {
        let ops = build(6).unwrap();
        let next = extend(&ops).unwrap();
        let h = ops.spinor_dim();
        for k in 0..ops.n {
            let u = &next.upper[k];
            for r in 0..2 * h {
                for c in 0..2 * h {
                    if (r < h) != (c < h) {
                        assert_eq!(u[(r, c)], ZERO);
                    }
                }
            }
        }
        for k in ops.n..next.n {
            let u = &next.upper[k];
            for r in 0..2 * h {
                for c in 0..2 * h {
                    if (r < h) == (c < h) {
                        assert_eq!(u[(r, c)], ZERO);
                    }
                }
            }
        }
    }

    #[test]
    fn build_rejects_bad_n() {
        for n in [0, 3, 18, 7] {
            assert!(matches!(build(n), Err(Error::Domain(_))), "n = {n}");
        }
    }

    #[test]
    fn spinor_sizes() {
        assert_eq!(build(2).unwrap().spinor_dim(), 1);
        assert_eq!(build(8).unwrap().spinor_dim(), 8);
        for n in (2..=8).step_by(2) {
            assert_eq!(spinor_dim(n + 8), 16 * spinor_dim(n));
        }
    }

    #[test]
    fn crossover_table() {
        for n in [2, 4, 6] {
            assert_eq!(dimension_crossover(n), Ordering::Greater);
        }
        assert_eq!(dimension_crossover(8), Ordering::Equal);
        for n in [10, 12, 14, 16] {
            assert_eq!(dimension_crossover(n), Ordering::Less);
        }
    }

    #[test]
    fn alignment_gives_antisymmetric_operators() {
        let ops = align_chirality(&build(6).unwrap()).unwrap();
        for m in ops.upper.iter().chain(&ops.lower) {
            assert!((m + &m.transpose()).max_abs() < 1e-14);
        }
        assert!(ops.clifford_residual() < 1e-14);
    }

    #[test]
    fn spin_metric_n8() {
        let ops = build(8).unwrap();
        let dims: Vec<usize> = [1.0, -1.0]
            .iter()
            .map(|&s| intertwiner_space(&ops, s).unwrap().len())
            .collect();
        assert_eq!(dims[0], 1);
        let sm = compute_spin_metric(&ops).unwrap();
        assert!(sm.eps.dist(&sm.eps.transpose()) <= 1e-12);
        assert!((&sm.eps * &sm.eps_inv).dist(&CMat::identity(8)) <= 1e-10);
        assert!(sm.lowering_residual <= 1e-9);
        let mut x = vec![ZERO; 8];
        x[0] = ONE;
        x[4] = ONE;
        assert!((sm.pair(&x, &x) - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn spin_metric_needs_n_mod_8() {
        let ops = build(6).unwrap();
        assert!(matches!(compute_spin_metric(&ops), Err(Error::Domain(_))));
    }
}
