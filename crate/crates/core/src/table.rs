//! Structure constants of a finite-dimensional algebra and the bilinear
//! product, conjugation and metric they induce.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ONE, ZERO};

/// Where a table came from; mirrored into the exported document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

impl Provenance {
    pub fn new(source: &str, params: serde_json::Value) -> Self {
        Self {
            source: source.to_string(),
            params,
        }
    }
}

/// Storage for `c[i][j][k]`. Cayley–Dickson output keeps exact integers.
#[derive(Debug, Clone, PartialEq)]
pub enum Constants {
    Exact(Vec<i8>),
    Complex(Vec<Complex64>),
}

impl Constants {
    fn get(&self, idx: usize) -> Complex64 {
        match self {
            Constants::Exact(v) => Complex64::new(f64::from(v[idx]), 0.0),
            Constants::Complex(v) => v[idx],
        }
    }

    fn len(&self) -> usize {
        match self {
            Constants::Exact(v) => v.len(),
            Constants::Complex(v) => v.len(),
        }
    }

    /// Collapses complex storage to exact integers when every entry is -1, 0 or 1.
    fn normalized(self) -> Self {
        match self {
            Constants::Complex(v) => {
                let exact: Option<Vec<i8>> = v
                    .iter()
                    .map(|z| {
                        if z.im != 0.0 {
                            None
                        } else if z.re == 0.0 {
                            Some(0)
                        } else if z.re == 1.0 {
                            Some(1)
                        } else if z.re == -1.0 {
                            Some(-1)
                        } else {
                            None
                        }
                    })
                    .collect();
                match exact {
                    Some(e) => Constants::Exact(e),
                    None => Constants::Complex(v),
                }
            }
            exact => exact,
        }
    }
}

/// Coordinates of an element over the basis `e_0, ..., e_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub coords: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![ZERO; dim],
        }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim);
        e.coords[i] = ONE;
        e
    }

    pub fn from_real(coords: &[f64]) -> Self {
        Self {
            coords: coords.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Structure constants `c[i][j][k]` with `e_i e_j = sum_k c[i][j][k] e_k`,
/// a diagonal metric and an optional cached unit.
#[derive(Debug, Clone)]
pub struct StructureTable {
    dim: usize,
    constants: Constants,
    metric: Vec<f64>,
    identity: Option<AlgebraElement>,
    provenance: Provenance,
    /// Global rescale applied by the forge normalisation, if any.
    pub lambda: Option<Complex64>,
    // nonzero (k, c) per (i, j)
    products: Vec<Vec<(usize, Complex64)>>,
}

impl StructureTable {
    pub fn new(
        dim: usize,
        constants: Constants,
        metric: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("table dimension must be positive".into()));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::Shape(format!(
                "{} constants for dimension {dim}",
                constants.len()
            )));
        }
        if metric.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: metric.len(),
            });
        }
        if let Constants::Complex(v) = &constants {
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidInput("constants must be finite".into()));
            }
        }
        let constants = constants.normalized();
        let products = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let v = constants.get(ij * dim + k);
                        (v != ZERO).then_some((k, v))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            dim,
            constants,
            metric,
            identity: None,
            provenance,
            lambda: None,
            products,
        })
    }

    pub fn from_fn(
        dim: usize,
        metric: Vec<f64>,
        provenance: Provenance,
        f: impl Fn(usize, usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut v = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    v.push(f(i, j, k));
                }
            }
        }
        Self::new(dim, Constants::Complex(v), metric, provenance)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.constants, Constants::Exact(_))
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.constants.get((i * self.dim + j) * self.dim + k)
    }

    /// Nonzero `(k, c[i][j][k])` for a pair of basis indices.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Complex64)] {
        &self.products[i * self.dim + j]
    }

    pub fn metric(&self) -> &[f64] {
        &self.metric
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn identity(&self) -> Option<&AlgebraElement> {
        self.identity.as_ref()
    }

    pub fn set_identity(&mut self, e: AlgebraElement) {
        assert_eq!(e.dim(), self.dim);
        self.identity = Some(e);
    }

    pub fn with_identity(mut self, e: AlgebraElement) -> Self {
        self.set_identity(e);
        self
    }

    /// Largest |c| over all constants.
    pub fn max_abs(&self) -> f64 {
        self.products
            .iter()
            .flatten()
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.products
            .iter()
            .flatten()
            .map(|(_, c)| c.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Product without dimension checks.
    pub(crate) fn mul(&self, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == ZERO {
                    continue;
                }
                let s = xi * yj;
                for &(k, c) in &self.products[i * n + j] {
                    out[k] += s * c;
                }
            }
        }
        out
    }

    /// Bilinear form from the stored diagonal metric.
    pub fn metric_form(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        x.iter()
            .zip(y)
            .zip(&self.metric)
            .map(|((a, b), g)| a * b * *g)
            .sum()
    }

    /// Relabels basis vectors: new index `perm[i]` carries old index `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let metric = (0..n).map(|i| self.metric[inv[i]]).collect();
        let mut t = Self::from_fn(n, metric, self.provenance.clone(), |i, j, k| {
            self.constant(inv[i], inv[j], inv[k])
        })?;
        if let Some(e) = &self.identity {
            t.identity = Some(AlgebraElement::new((0..n).map(|i| e.coords[inv[i]]).collect()));
        }
        Ok(t)
    }
}

fn check_dim(t: &StructureTable, x: &AlgebraElement) -> Result<()> {
    if x.dim() != t.dim {
        return Err(Error::DimensionMismatch {
            expected: t.dim,
            got: x.dim(),
        });
    }
    Ok(())
}

/// `(xy)^k = sum_ij x^i y^j c[i][j][k]`.
pub fn multiply(t: &StructureTable, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    check_dim(t, x)?;
    check_dim(t, y)?;
    Ok(AlgebraElement::new(t.mul(&x.coords, &y.coords)))
}

/// Conjugation `x -> 2 <x,e>/<e,e> e - x`, which keeps the unit component
/// and negates the rest.
pub fn conjugate(t: &StructureTable, x: &AlgebraElement) -> Result<AlgebraElement> {
    check_dim(t, x)?;
    let e = t
        .identity()
        .ok_or_else(|| Error::InvalidInput("conjugation needs an identity element".into()))?;
    let ee = t.metric_form(&e.coords, &e.coords);
    if ee.norm() == 0.0 {
        return Err(Error::InvalidInput("identity element is isotropic".into()));
    }
    let s = t.metric_form(&x.coords, &e.coords) / ee * 2.0;
    Ok(e.scale(s).sub(x))
}

/// Metric `<x,y>`, the unit coefficient of `(x ybar + y xbar)/2`. The
/// remainder after removing that multiple of the unit must vanish.
pub fn inner(t: &StructureTable, x: &AlgebraElement, y: &AlgebraElement) -> Result<Complex64> {
    inner_with_tol(t, x, y, 1e-9)
}

pub fn inner_with_tol(
    t: &StructureTable,
    x: &AlgebraElement,
    y: &AlgebraElement,
    tol: f64,
) -> Result<Complex64> {
    let (s, resid) = inner_parts(t, x, y)?;
    if resid > tol {
        return Err(Error::MetricInconsistency { residual: resid });
    }
    Ok(s)
}

/// Returns the unit coefficient and the size of the non-scalar remainder.
pub(crate) fn inner_parts(
    t: &StructureTable,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<(Complex64, f64)> {
    let xb = conjugate(t, x)?;
    let yb = conjugate(t, y)?;
    let w = multiply(t, x, &yb)?
        .add(&multiply(t, y, &xb)?)
        .scale(Complex64::new(0.5, 0.0));
    let e = t.identity().expect("checked by conjugate");
    let ee = t.metric_form(&e.coords, &e.coords);
    let s = t.metric_form(&w.coords, &e.coords) / ee;
    let resid = w.sub(&e.scale(s)).max_abs();
    Ok((s, resid))
}
