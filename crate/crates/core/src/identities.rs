//! Exhaustive and sampled checks of algebra identities on a
//! [`StructureTable`].
//!
//! Laws quadratic in `a` are swept over `a` in `{e_i} ∪ {e_i + e_j}` and
//! `b` over the basis, which determines a quadratic form completely.
//! Power-associativity is cubic in `a`, so its sweep adds `e_i - e_j` and
//! `e_i + e_j + e_k`. Sweep inputs keep integer coordinates, so exact
//! tables give exact residuals. Each check also evaluates seeded random
//! unit-norm pairs, reported separately as `sampled_residual`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ONE, ZERO};
use crate::table::{inner_parts, AlgebraElement, StructureTable};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// `|uv|` bound for a zero-divisor pair.
pub const ZERO_DIVISOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
}

/// Where the worst residual was seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    /// Worst residual of the exhaustive sweep.
    pub residual: f64,
    pub witness: Option<Witness>,
    /// Worst residual over random samples, when the check samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled_residual: Option<f64>,
    pub verdict: Verdict,
    pub tolerance: f64,
}

impl IdentityReport {
    fn new(identity: &str, residual: f64, witness: Option<Witness>, tolerance: f64) -> Self {
        Self::with_samples(identity, residual, witness, None, tolerance)
    }

    fn with_samples(
        identity: &str,
        residual: f64,
        witness: Option<Witness>,
        sampled_residual: Option<f64>,
        tolerance: f64,
    ) -> Self {
        let worst = nan_max(residual, sampled_residual.unwrap_or(0.0));
        let verdict = if worst <= tolerance {
            Verdict::Holds
        } else {
            Verdict::Fails
        };
        Self {
            identity: identity.to_string(),
            residual,
            witness,
            sampled_residual,
            verdict,
            tolerance,
        }
    }

    /// Larger of the exhaustive and sampled residuals.
    pub fn max_residual(&self) -> f64 {
        nan_max(self.residual, self.sampled_residual.unwrap_or(0.0))
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tolerance: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOL,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

/// A sweep input: integer coordinates plus the basis labels it came from.
struct Probe {
    coords: Vec<Complex64>,
    support: Vec<usize>,
    label: String,
}

fn probe(n: usize, terms: &[(usize, f64)]) -> Probe {
    let mut coords = vec![ZERO; n];
    let mut label = String::new();
    for (k, &(i, s)) in terms.iter().enumerate() {
        coords[i] += Complex64::new(s, 0.0);
        if k > 0 || s < 0.0 {
            label.push(if s < 0.0 { '-' } else { '+' });
        }
        label.push_str(&format!("e{i}"));
    }
    Probe {
        coords,
        support: terms.iter().map(|t| t.0).collect(),
        label,
    }
}

fn basis_probes(n: usize) -> Vec<Probe> {
    (0..n).map(|i| probe(n, &[(i, 1.0)])).collect()
}

fn quadratic_probes(n: usize) -> Vec<Probe> {
    let mut out = basis_probes(n);
    for i in 0..n {
        for j in i + 1..n {
            out.push(probe(n, &[(i, 1.0), (j, 1.0)]));
        }
    }
    out
}

fn cubic_probes(n: usize) -> Vec<Probe> {
    let mut out = quadratic_probes(n);
    for i in 0..n {
        for j in i + 1..n {
            out.push(probe(n, &[(i, 1.0), (j, -1.0)]));
            for k in j + 1..n {
                out.push(probe(n, &[(i, 1.0), (j, 1.0), (k, 1.0)]));
            }
        }
    }
    out
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    v.iter().map(|x| Complex64::new(x / norm, 0.0)).collect()
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn diff(x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

type Law = dyn Fn(&StructureTable, &[Complex64], &[Complex64]) -> f64 + Sync;

/// Worst residual of `law(a, b)` over `a` in `a_set` and `b` in the basis,
/// then over random pairs. Deterministic: ties keep the first in scan order.
fn sweep(t: &StructureTable, a_set: &[Probe], opts: &CheckOptions, law: &Law) -> (f64, Option<Witness>, f64) {
    let n = t.dim();
    let b_set = basis_probes(n);
    let per_a: Vec<(f64, Option<Witness>)> = a_set
        .par_iter()
        .map(|a| {
            let mut best = (0.0, None);
            for b in &b_set {
                let r = law(t, &a.coords, &b.coords);
                if r > best.0 || (best.1.is_none() && r.is_nan()) {
                    let mut indices = a.support.clone();
                    indices.extend(&b.support);
                    best = (
                        r,
                        Some(Witness {
                            indices,
                            description: format!("a = {}, b = {}", a.label, b.label),
                        }),
                    );
                }
            }
            best
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..opts.samples)
        .map(|_| (random_unit(n, &mut rng), random_unit(n, &mut rng)))
        .collect();
    let sampled = pairs
        .par_iter()
        .map(|(a, b)| law(t, a, b))
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, nan_max);

    let mut best = (0.0, None);
    for (r, w) in per_a {
        if r > best.0 || r.is_nan() && !best.0.is_nan() {
            best = (r, w);
        }
    }
    (best.0, best.1, sampled)
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn check(t: &StructureTable, name: &str, a_set: &[Probe], opts: &CheckOptions, law: &Law) -> IdentityReport {
    let (r, w, sampled) = sweep(t, a_set, opts, law);
    let sampled = (opts.samples > 0).then_some(sampled);
    IdentityReport::with_samples(name, r, w, sampled, opts.tolerance)
}

fn left_alt(t: &StructureTable, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let aa = t.mul(a, a);
    diff(&t.mul(&aa, b), &t.mul(a, &t.mul(a, b)))
}

fn right_alt(t: &StructureTable, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let aa = t.mul(a, a);
    diff(&t.mul(b, &aa), &t.mul(&t.mul(b, a), a))
}

/// `(aa)b - a(ab) = b(aa) - (ba)a`.
pub fn check_weak_alternativity(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    check(t, "weak-alternative", &quadratic_probes(t.dim()), opts, &|t, a, b| {
        max_abs(&diff(&left_alt(t, a, b), &right_alt(t, a, b)))
    })
}

/// `a(ba) = (ab)a`.
pub fn check_flexible(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    check(t, "flexible", &quadratic_probes(t.dim()), opts, &|t, a, b| {
        max_abs(&diff(&t.mul(a, &t.mul(b, a)), &t.mul(&t.mul(a, b), a)))
    })
}

/// `a(aa) = (aa)a`.
pub fn check_power_associative(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    check(t, "power-associative", &cubic_probes(t.dim()), opts, &|t, a, _| {
        let aa = t.mul(a, a);
        max_abs(&diff(&t.mul(a, &aa), &t.mul(&aa, a)))
    })
}

pub fn check_left_alternative(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    check(t, "left-alternative", &quadratic_probes(t.dim()), opts, &|t, a, b| {
        max_abs(&left_alt(t, a, b))
    })
}

pub fn check_right_alternative(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    check(t, "right-alternative", &quadratic_probes(t.dim()), opts, &|t, a, b| {
        max_abs(&right_alt(t, a, b))
    })
}

/// Both `(aa)b = a(ab)` and `b(aa) = (ba)a`; the witness names the side.
pub fn check_alternative(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    let l = check_left_alternative(t, opts);
    let r = check_right_alternative(t, opts);
    let sampled = match (l.sampled_residual, r.sampled_residual) {
        (Some(a), Some(b)) => Some(nan_max(a, b)),
        _ => None,
    };
    let (worst, side) = if r.residual > l.residual { (r, "right") } else { (l, "left") };
    let witness = worst.witness.map(|w| Witness {
        indices: w.indices,
        description: format!("{side}: {}", w.description),
    });
    IdentityReport::with_samples("alternative", worst.residual, witness, sampled, opts.tolerance)
}

/// `(ab)c = a(bc)` over all basis triples.
pub fn check_associative(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    let n = t.dim();
    let basis = basis_probes(n);
    let per_i: Vec<(f64, Option<Witness>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0, None);
            for j in 0..n {
                let ij = t.mul(&basis[i].coords, &basis[j].coords);
                for k in 0..n {
                    let l = t.mul(&ij, &basis[k].coords);
                    let r = t.mul(&basis[i].coords, &t.mul(&basis[j].coords, &basis[k].coords));
                    let res = max_abs(&diff(&l, &r));
                    if res > best.0 {
                        best = (
                            res,
                            Some(Witness {
                                indices: vec![i, j, k],
                                description: format!("(e{i} e{j}) e{k} vs e{i} (e{j} e{k})"),
                            }),
                        );
                    }
                }
            }
            best
        })
        .collect();
    let mut best = (0.0, None);
    for (r, w) in per_i {
        if r > best.0 {
            best = (r, w);
        }
    }
    IdentityReport::new("associative", best.0, best.1, opts.tolerance)
}

/// `P[i][j][l][m] = <e_i e_j, e_l e_m>` under the stored metric.
fn product_pairings(t: &StructureTable) -> Vec<Complex64> {
    let n = t.dim();
    let g = t.metric();
    let prods: Vec<Vec<Complex64>> = (0..n * n)
        .map(|ij| {
            let mut v = vec![ZERO; n];
            for &(k, c) in t.basis_product(ij / n, ij % n) {
                v[k] = c * g[k];
            }
            v
        })
        .collect();
    (0..n * n)
        .into_par_iter()
        .flat_map_iter(|ij| {
            let prods = &prods;
            (0..n * n).map(move |lm| {
                t.basis_product(lm / n, lm % n)
                    .iter()
                    .map(|&(k, c)| prods[ij][k] * c)
                    .sum()
            })
        })
        .collect()
}

fn quadruple_sweep(
    t: &StructureTable,
    name: &str,
    tol: f64,
    f: impl Fn(&[Complex64], [usize; 4]) -> f64 + Sync,
) -> IdentityReport {
    let n = t.dim();
    let p = product_pairings(t);
    let per_i: Vec<(f64, [usize; 4])> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0, [i, 0, 0, 0]);
            for j in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let r = f(&p, [i, j, l, m]);
                        if r > best.0 {
                            best = (r, [i, j, l, m]);
                        }
                    }
                }
            }
            best
        })
        .collect();
    let mut best = (0.0, None);
    for (r, q) in per_i {
        if r > best.0 {
            best = (r, Some(q));
        }
    }
    let witness = best.1.map(|q| Witness {
        indices: q.to_vec(),
        description: format!("(i, j, l, m) = ({}, {}, {}, {})", q[0], q[1], q[2], q[3]),
    });
    IdentityReport::new(name, best.0, witness, tol)
}

/// `(<e_j e_i, e_m e_l> + <e_j e_l, e_m e_i>) / 2 = g_jm g_il`.
pub fn check_full_normalization(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    let n = t.dim();
    let g = t.metric().to_vec();
    let at = move |p: &[Complex64], a: usize, b: usize, c: usize, d: usize| p[((a * n + b) * n + c) * n + d];
    quadruple_sweep(t, "full-normalization", opts.tolerance, move |p, [j, i, m, l]| {
        let lhs = (at(p, j, i, m, l) + at(p, j, l, m, i)) * 0.5;
        let rhs = if j == m && i == l { g[j] * g[i] } else { 0.0 };
        (lhs - rhs).norm()
    })
}

/// `<e_i e_j, e_l e_m> + <e_l e_j, e_i e_m> = <e_j e_i, e_m e_l> + <e_j e_l, e_m e_i>`.
pub fn check_weak_normalization(t: &StructureTable, opts: &CheckOptions) -> IdentityReport {
    let n = t.dim();
    let at = move |p: &[Complex64], a: usize, b: usize, c: usize, d: usize| p[((a * n + b) * n + c) * n + d];
    quadruple_sweep(t, "weak-normalization", opts.tolerance, move |p, [i, j, l, m]| {
        let lhs = at(p, i, j, l, m) + at(p, l, j, i, m);
        let rhs = at(p, j, i, m, l) + at(p, j, l, m, i);
        (lhs - rhs).norm()
    })
}

/// Weak and full normalization, in that order.
pub fn check_normalization(t: &StructureTable, opts: &CheckOptions) -> [IdentityReport; 2] {
    [check_weak_normalization(t, opts), check_full_normalization(t, opts)]
}

/// `(a bbar + b abar)/2` is a multiple of `e` whose coefficient is `g_ab`.
pub fn check_metric_compat(t: &StructureTable, opts: &CheckOptions) -> Result<IdentityReport> {
    let n = t.dim();
    let mut best = (0.0, None);
    for i in 0..n {
        for j in i..n {
            let (s, resid) = inner_parts(t, &AlgebraElement::basis(n, i), &AlgebraElement::basis(n, j))?;
            let want = if i == j { t.metric()[i] } else { 0.0 };
            let r = resid.max((s - Complex64::new(want, 0.0)).norm());
            if r > best.0 {
                best = (
                    r,
                    Some(Witness {
                        indices: vec![i, j],
                        description: format!("<e{i}, e{j}>"),
                    }),
                );
            }
        }
    }
    Ok(IdentityReport::new("metric", best.0, best.1, opts.tolerance))
}

/// A pair with `uv = 0`, each factor a sum of at most two signed basis vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDivisorPair {
    pub u: Vec<(usize, i8)>,
    pub v: Vec<(usize, i8)>,
    pub residual: f64,
}

fn signed_candidates(n: usize, max_support: usize) -> Vec<Vec<(usize, i8)>> {
    let mut out: Vec<Vec<(usize, i8)>> = (0..n).map(|p| vec![(p, 1)]).collect();
    if max_support >= 2 {
        for p in 0..n {
            for q in p + 1..n {
                out.push(vec![(p, 1), (q, 1)]);
                out.push(vec![(p, 1), (q, -1)]);
            }
        }
    }
    out
}

/// Exhaustive search over `u = e_p (± e_q)`, `v = e_r (± e_s)`.
pub fn find_zero_divisors(t: &StructureTable, max_support: usize) -> Result<Vec<ZeroDivisorPair>> {
    if !(1..=2).contains(&max_support) {
        return Err(Error::Domain(format!("max_support must be 1 or 2, got {max_support}")));
    }
    let n = t.dim();
    let cands = signed_candidates(n, max_support);
    let coords: Vec<Vec<Complex64>> = cands
        .iter()
        .map(|c| {
            let mut v = vec![ZERO; n];
            for &(i, s) in c {
                v[i] = ONE * f64::from(s);
            }
            v
        })
        .collect();
    let found: Vec<Vec<ZeroDivisorPair>> = (0..cands.len())
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in 0..cands.len() {
                let uv = t.mul(&coords[a], &coords[b]);
                let r = uv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if r <= ZERO_DIVISOR_TOL {
                    out.push(ZeroDivisorPair {
                        u: cands[a].clone(),
                        v: cands[b].clone(),
                        residual: r,
                    });
                }
            }
            out
        })
        .collect();
    Ok(found.concat())
}

/// Names accepted by [`run_suite`].
pub const SUITE_NAMES: &[&str] = &[
    "weak-alternative",
    "flexible",
    "power-associative",
    "alternative",
    "left-alternative",
    "right-alternative",
    "associative",
    "normalization",
    "weak-normalization",
    "full-normalization",
    "metric",
];

/// Runs the named checks in order; `normalization` expands to both forms.
pub fn run_suite(t: &StructureTable, names: &[&str], opts: &CheckOptions) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for &name in names {
        match name {
            "weak-alternative" => out.push(check_weak_alternativity(t, opts)),
            "flexible" => out.push(check_flexible(t, opts)),
            "power-associative" => out.push(check_power_associative(t, opts)),
            "alternative" => out.push(check_alternative(t, opts)),
            "left-alternative" => out.push(check_left_alternative(t, opts)),
            "right-alternative" => out.push(check_right_alternative(t, opts)),
            "associative" => out.push(check_associative(t, opts)),
            "normalization" => out.extend(check_normalization(t, opts)),
            "weak-normalization" => out.push(check_weak_normalization(t, opts)),
            "full-normalization" => out.push(check_full_normalization(t, opts)),
            "metric" => out.push(check_metric_compat(t, opts)?),
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown identity '{other}'; expected one of {}",
                    SUITE_NAMES.join(", ")
                )))
            }
        }
    }
    Ok(out)
}
