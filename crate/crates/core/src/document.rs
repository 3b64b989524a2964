//! JSON interchange for structure tables.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{AlgebraElement, Constants, Provenance, StructureTable};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDocument {
    pub schema_version: String,
    pub dim: usize,
    pub metric: Vec<f64>,
    pub constants: Vec<ConstantEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Vec<f64>>,
    pub provenance: Provenance,
}

/// Zero constants are omitted; the identity keeps real parts only.
pub fn export_table(t: &StructureTable) -> TableDocument {
    let n = t.dim();
    let mut constants = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for &(k, c) in t.basis_product(i, j) {
                constants.push(ConstantEntry {
                    i,
                    j,
                    k,
                    re: c.re,
                    im: c.im,
                });
            }
        }
    }
    TableDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        dim: n,
        metric: t.metric().to_vec(),
        constants,
        identity: t.identity().map(|e| e.coords.iter().map(|z| z.re).collect()),
        provenance: t.provenance().clone(),
    }
}

pub fn import_table(doc: &TableDocument) -> Result<StructureTable> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported schema_version '{}'",
            doc.schema_version
        )));
    }
    let n = doc.dim;
    if n == 0 {
        return Err(Error::InvalidInput("dim must be positive".into()));
    }
    let mut c = vec![Complex64::new(0.0, 0.0); n * n * n];
    let mut seen = vec![false; n * n * n];
    for e in &doc.constants {
        if e.i >= n || e.j >= n || e.k >= n {
            return Err(Error::InvalidInput(format!(
                "constant index ({}, {}, {}) out of range for dim {n}",
                e.i, e.j, e.k
            )));
        }
        let idx = (e.i * n + e.j) * n + e.k;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::InvalidInput(format!(
                "duplicate constant ({}, {}, {})",
                e.i, e.j, e.k
            )));
        }
        c[idx] = Complex64::new(e.re, e.im);
    }
    let mut t = StructureTable::new(n, Constants::Complex(c), doc.metric.clone(), doc.provenance.clone())?;
    if let Some(e) = &doc.identity {
        if e.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: e.len(),
            });
        }
        t.set_identity(AlgebraElement::from_real(e));
    }
    t.lambda = doc
        .provenance
        .params
        .get("lambda")
        .and_then(|l| Some(Complex64::new(l.get(0)?.as_f64()?, l.get(1)?.as_f64()?)));
    Ok(t)
}

pub fn to_json(t: &StructureTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(&export_table(t))?)
}

pub fn from_json(s: &str) -> Result<StructureTable> {
    import_table(&serde_json::from_str(s)?)
}

pub fn write_table(t: &StructureTable, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(t)?)?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<StructureTable> {
    from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley_dickson::{octonions, real};

    #[test]
    fn real_line_document() {
        let doc = export_table(&real());
        assert_eq!(doc.constants, vec![ConstantEntry { i: 0, j: 0, k: 0, re: 1.0, im: 0.0 }]);
        assert_eq!(doc.identity, Some(vec![1.0]));
    }

    #[test]
    fn octonions_round_trip() {
        let t = octonions();
        let back = from_json(&to_json(&t).unwrap()).unwrap();
        assert_eq!(export_table(&back), export_table(&t));
        assert!(back.is_exact());
    }

    #[test]
    fn bad_documents() {
        let mut doc = export_table(&octonions());
        doc.constants[0].k = 8;
        assert!(import_table(&doc).is_err());
        let mut doc = export_table(&octonions());
        doc.schema_version = "2".into();
        assert!(import_table(&doc).is_err());
        let mut doc = export_table(&octonions());
        let dup = doc.constants[0].clone();
        doc.constants.push(dup);
        assert!(import_table(&doc).is_err());
        assert!(from_json("{").is_err());
    }
}
